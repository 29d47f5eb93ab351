/**
 * Summarizer backends: the identity stub used by integration tests, and a
 * transformers.js pipeline around off-the-shelf checkpoints (the usual
 * suspects being bart-large-cnn / bart-large-xsum and the two pegasus
 * variants). The stub needs no model assets or network at all.
 */

export interface AdapterConfig {
  modelName: string;
  maxSummaryLength: number;
  device: string;
  stub: boolean;
}

export interface Summarizer {
  summarize(document: string): Promise<string>;
}

class StubSummarizer implements Summarizer {
  async summarize(document: string): Promise<string> {
    return document;
  }
}

class PipelineSummarizer implements Summarizer {
  constructor(
    private readonly pipe: (text: string, options: object) => Promise<Array<{ summary_text: string }>>,
    private readonly maxLength: number,
  ) {}

  async summarize(document: string): Promise<string> {
    const result = await this.pipe(document, { max_new_tokens: this.maxLength });
    if (!result.length || typeof result[0].summary_text !== 'string') {
      throw new Error('model returned no summary');
    }
    return result[0].summary_text;
  }
}

export async function loadSummarizer(config: AdapterConfig): Promise<Summarizer> {
  if (config.stub) {
    return new StubSummarizer();
  }
  let transformers;
  try {
    // optional dependency; only touched outside stub mode
    transformers = await import('@xenova/transformers' as string);
  } catch (err) {
    throw new Error(
      `cannot load @xenova/transformers (install it to run real models): ${err}`,
    );
  }
  const pipe = await transformers.pipeline('summarization', config.modelName, {
    device: config.device || undefined,
  });
  return new PipelineSummarizer(pipe, config.maxSummaryLength);
}
