/**
 * Line channel to the session endpoint.
 *
 * The browser talks WebSocket to a small bridge that pipes lines to the
 * analyzer's TCP protocol. On disconnect, outbound lines buffer up to a
 * cap, oldest dropped first with a visible warning.
 */

export const BUFFER_CAP = 1000;

export interface LineTransport {
  send(line: string): void;
  readonly open: boolean;
}

export class BufferedLineSender {
  private buffer: string[] = [];
  dropped = 0;

  constructor(
    private transport: LineTransport,
    private onWarning: (message: string) => void = () => {},
    private cap: number = BUFFER_CAP,
  ) {}

  send(line: string): void {
    if (this.transport.open) {
      this.transport.send(line);
      return;
    }
    this.buffer.push(line);
    if (this.buffer.length > this.cap) {
      this.buffer.shift();
      this.dropped += 1;
      this.onWarning(`connection lost: dropped ${this.dropped} oldest event(s)`);
    }
  }

  get buffered(): number {
    return this.buffer.length;
  }

  /** Replay buffered lines once the transport is back. */
  flush(): number {
    let sent = 0;
    while (this.buffer.length > 0 && this.transport.open) {
      const line = this.buffer.shift();
      if (line !== undefined) {
        this.transport.send(line);
        sent += 1;
      }
    }
    return sent;
  }
}

/** Split a byte/text stream into newline-terminated protocol lines. */
export class LineAssembler {
  private partial = "";

  push(chunk: string, onLine: (line: string) => void): void {
    this.partial += chunk;
    for (;;) {
      const nl = this.partial.indexOf("\n");
      if (nl < 0) {
        return;
      }
      onLine(this.partial.slice(0, nl));
      this.partial = this.partial.slice(nl + 1);
    }
  }
}

export function connectWebSocket(
  url: string,
  onLine: (line: string) => void,
  onStatus: (connected: boolean) => void,
): { sender: BufferedLineSender; socket: WebSocket } {
  const socket = new WebSocket(url);
  const assembler = new LineAssembler();
  const transport: LineTransport = {
    send: (line) => socket.send(line + "\n"),
    get open() {
      return socket.readyState === WebSocket.OPEN;
    },
  };
  const sender = new BufferedLineSender(transport, (msg) => console.warn(msg));
  socket.onopen = () => {
    onStatus(true);
    sender.flush();
  };
  socket.onclose = () => onStatus(false);
  socket.onmessage = (ev) => assembler.push(String(ev.data), onLine);
  return { sender, socket };
}
