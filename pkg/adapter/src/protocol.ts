/**
 * The factharness subprocess line protocol.
 *
 * One request per line: the decimal byte length of the escaped payload, a
 * single space, then the UTF-8 document with backslash, LF, and CR escaped
 * as `\\`, `\n`, `\r`. Responses mirror the framing; a line starting with
 * "ERR " reports a per-request failure.
 */

export class ProtocolError extends Error {}

export function escapePayload(text: string): string {
  return text.replace(/\\/g, '\\\\').replace(/\n/g, '\\n').replace(/\r/g, '\\r');
}

export function unescapePayload(payload: string): string {
  let out = '';
  for (let i = 0; i < payload.length; i++) {
    const ch = payload[i];
    if (ch !== '\\') {
      out += ch;
      continue;
    }
    if (i + 1 >= payload.length) {
      throw new ProtocolError('dangling escape at end of payload');
    }
    const next = payload[i + 1];
    if (next === '\\') out += '\\';
    else if (next === 'n') out += '\n';
    else if (next === 'r') out += '\r';
    else throw new ProtocolError(`unknown escape sequence \\${next}`);
    i++;
  }
  return out;
}

export function encodeLine(text: string): string {
  const payload = escapePayload(text);
  return `${Buffer.byteLength(payload, 'utf8')} ${payload}`;
}

export function decodeLine(line: string): string {
  const trimmed = line.replace(/\r?\n$/, '');
  if (trimmed.startsWith('ERR ')) {
    throw new ProtocolError(`backend error: ${unescapePayload(trimmed.slice(4))}`);
  }
  const space = trimmed.indexOf(' ');
  if (space < 1) {
    throw new ProtocolError(`malformed protocol line: ${trimmed.slice(0, 80)}`);
  }
  const lengthField = trimmed.slice(0, space);
  if (!/^[0-9]+$/.test(lengthField)) {
    throw new ProtocolError(`malformed length field: ${lengthField}`);
  }
  const payload = trimmed.slice(space + 1);
  const actual = Buffer.byteLength(payload, 'utf8');
  if (actual !== Number(lengthField)) {
    throw new ProtocolError(`length mismatch: header ${lengthField}, payload ${actual}`);
  }
  return unescapePayload(payload);
}

export function encodeErrorLine(message: string): string {
  return 'ERR ' + escapePayload(message);
}
