/**
 * WebSocket <-> TCP bridge.
 *
 * Browsers cannot open raw TCP sockets, so each WebSocket connection is
 * piped to one TCP connection against the session server's line
 * protocol. Line order is preserved in both directions; closing either
 * side closes the other, ending that session.
 */

import net from "node:net";
import { WebSocketServer, WebSocket } from "ws";

export interface BridgeHandle {
  wss: WebSocketServer;
  close(): Promise<void>;
}

export function startBridge(wsPort: number, tcpHost: string, tcpPort: number): BridgeHandle {
  const wss = new WebSocketServer({ port: wsPort });
  wss.on("connection", (ws: WebSocket) => {
    const tcp = net.connect(tcpPort, tcpHost);
    tcp.setNoDelay(true);

    ws.on("message", (data) => {
      tcp.write(typeof data === "string" ? data : data.toString());
    });
    tcp.on("data", (data) => {
      if (ws.readyState === WebSocket.OPEN) {
        ws.send(data.toString());
      }
    });

    const shutdown = (): void => {
      tcp.destroy();
      ws.close();
    };
    ws.on("close", shutdown);
    ws.on("error", shutdown);
    tcp.on("close", () => ws.close());
    tcp.on("error", shutdown);
  });
  return {
    wss,
    close: () =>
      new Promise((resolve) => {
        for (const client of wss.clients) {
          client.terminate();
        }
        wss.close(() => resolve());
      }),
  };
}

const isMain = process.argv[1]?.endsWith("bridge.js");
if (isMain) {
  const wsPort = Number(process.env.BRIDGE_WS_PORT ?? 8766);
  const tcpHost = process.env.ICODE_HOST ?? "127.0.0.1";
  const tcpPort = Number(process.env.ICODE_PORT ?? 8765);
  startBridge(wsPort, tcpHost, tcpPort);
  console.log(`bridge: ws://0.0.0.0:${wsPort} <-> tcp ${tcpHost}:${tcpPort}`);
}
