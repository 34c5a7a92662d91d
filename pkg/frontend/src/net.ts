// Thin socket wrapper: parse incoming frames, expose a send queue for the
// reducer's outbound messages.

import { ServerMessage, parseServerMessage } from "./protocol.js";

export interface SessionSocket {
  send(text: string): void;
  close(): void;
}

export function connectSession(
  baseUrl: string,
  sessionId: string,
  onMessage: (msg: ServerMessage | null) => void,
  onClose: (reason: string) => void,
): SessionSocket {
  const url = `${baseUrl.replace(/^http/, "ws")}/session?session=${encodeURIComponent(sessionId)}`;
  const ws = new WebSocket(url);
  ws.onmessage = (event) => onMessage(parseServerMessage(String(event.data)));
  ws.onclose = (event) => onClose(event.reason || `socket closed (${event.code})`);
  ws.onerror = () => onClose("socket error");
  return {
    send(text: string) {
      if (ws.readyState === WebSocket.OPEN) {
        ws.send(text);
      }
    },
    close() {
      ws.close();
    },
  };
}
