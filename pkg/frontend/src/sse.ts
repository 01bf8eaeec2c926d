// Incremental parser for the service's SSE stream. Frames look like
//   event: task_finished
//   data: {"round": 0, ...}
// separated by a blank line; data is always one JSON document, though it
// may be split across several data: lines.

export interface SseFrame {
  event: string;
  data: unknown;
}

export class SseParser {
  private buffer = "";

  /** Feed one network chunk; returns every frame completed by it. */
  push(chunk: string): SseFrame[] {
    this.buffer += chunk;
    const frames: SseFrame[] = [];
    for (;;) {
      const boundary = this.buffer.search(/\r?\n\r?\n/);
      if (boundary < 0) break;
      const raw = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary).replace(/^\r?\n\r?\n/, "");
      const frame = parseFrame(raw);
      if (frame !== null) frames.push(frame);
    }
    return frames;
  }
}

function parseFrame(raw: string): SseFrame | null {
  let event = "message";
  const dataLines: string[] = [];
  for (const line of raw.split(/\r?\n/)) {
    if (line.startsWith("event:")) {
      event = line.slice("event:".length).trim();
    } else if (line.startsWith("data:")) {
      dataLines.push(line.slice("data:".length).trim());
    }
    // Comment (":") and unknown fields are ignored per the SSE spec.
  }
  if (dataLines.length === 0) return null;
  const joined = dataLines.join("\n");
  try {
    return { event, data: JSON.parse(joined) };
  } catch {
    return { event, data: joined };
  }
}

/**
 * Read a streaming response body frame by frame. Throws whatever the
 * reader throws (a dropped connection surfaces here); frames already
 * delivered to onFrame stay delivered.
 */
export async function readSseBody(
  body: ReadableStream<Uint8Array>,
  onFrame: (frame: SseFrame) => void,
): Promise<void> {
  const reader = body.getReader();
  const decoder = new TextDecoder("utf-8");
  const parser = new SseParser();
  for (;;) {
    const { value, done } = await reader.read();
    if (done) break;
    for (const frame of parser.push(decoder.decode(value, { stream: true }))) {
      onFrame(frame);
    }
  }
  for (const frame of parser.push(decoder.decode())) {
    onFrame(frame);
  }
}
