#!/usr/bin/env node
/**
 * factharness model adapter: reads line-protocol requests on stdin, writes
 * one summary response per request on stdout, until end of input.
 *
 * Usage:
 *   factharness-adapter --stub
 *   factharness-adapter --model Xenova/bart-large-cnn --max-summary-length 128
 *
 * A model that cannot be loaded exits nonzero with a message on stderr; a
 * failure on a single request produces an ERR response line and the loop
 * continues.
 */

import { createInterface } from 'readline';
import { decodeLine, encodeErrorLine, encodeLine, ProtocolError } from './protocol';
import { AdapterConfig, loadSummarizer } from './summarizer';

function parseArgs(argv: string[]): AdapterConfig {
  const config: AdapterConfig = {
    modelName: 'Xenova/bart-large-cnn',
    maxSummaryLength: 142,
    device: '',
    stub: false,
  };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new Error(`${arg} needs a value`);
      return argv[++i];
    };
    if (arg === '--stub') config.stub = true;
    else if (arg === '--model') config.modelName = next();
    else if (arg === '--max-summary-length') config.maxSummaryLength = Number(next());
    else if (arg === '--device') config.device = next();
    else if (arg === '--help' || arg === '-h') {
      process.stdout.write(
        'usage: factharness-adapter [--stub] [--model NAME] ' +
          '[--max-summary-length N] [--device D]\n',
      );
      process.exit(0);
    } else throw new Error(`unknown flag ${arg}`);
  }
  if (!config.modelName) throw new Error('model name cannot be empty');
  if (!Number.isFinite(config.maxSummaryLength) || config.maxSummaryLength < 1) {
    throw new Error('max-summary-length must be a positive number');
  }
  return config;
}

export async function serve(config: AdapterConfig): Promise<void> {
  const summarizer = await loadSummarizer(config);
  const lines = createInterface({ input: process.stdin, crlfDelay: Infinity });

  // Serialize request handling: one response per request, in order.
  let chain: Promise<void> = Promise.resolve();
  lines.on('line', (line: string) => {
    chain = chain.then(async () => {
      let response: string;
      try {
        const document = decodeLine(line);
        const summary = await summarizer.summarize(document);
        response = encodeLine(summary);
      } catch (err) {
        const message = err instanceof ProtocolError ? err.message : `inference failed: ${err}`;
        response = encodeErrorLine(message);
      }
      process.stdout.write(response + '\n');
    });
  });
  await new Promise<void>((resolve) => lines.on('close', () => resolve()));
  await chain;
}

async function main(): Promise<void> {
  let config: AdapterConfig;
  try {
    config = parseArgs(process.argv.slice(2));
  } catch (err) {
    process.stderr.write(`factharness-adapter: ${err instanceof Error ? err.message : err}\n`);
    process.exit(2);
  }
  try {
    await serve(config);
  } catch (err) {
    process.stderr.write(`factharness-adapter: ${err instanceof Error ? err.message : err}\n`);
    process.exit(1);
  }
}

if (require.main === module) {
  void main();
}
