/**
 * Message types for the newline-delimited JSON detector protocol.
 *
 * The worker opens with a hello, the client replies, then detect requests
 * and responses alternate one at a time (no pipelining):
 *
 *     worker  -> {"type":"hello","version":1,"name":"<worker-name>"}
 *     client  -> {"type":"hello","version":1}
 *     client  -> {"type":"detect","id":N,"width":W,"height":H,"channels":1|3,
 *                 "format":"png-base64","data":"<base64 PNG>"}
 *     worker  -> {"type":"detections","id":N,"detections":[{x,y,w,h,score}]}
 *             |  {"type":"error","id":N,"message":"..."}
 *     client  -> {"type":"shutdown"}        (worker exits 0)
 */

export const PROTOCOL_VERSION = 1;

export interface HelloMessage {
  type: "hello";
  version: number;
  name?: string;
}

export interface DetectRequest {
  type: "detect";
  id: number;
  width: number;
  height: number;
  channels: number;
  format: string;
  data: string;
}

export interface ShutdownMessage {
  type: "shutdown";
}

export type Request = HelloMessage | DetectRequest | ShutdownMessage;

export interface DetectionBox {
  x: number;
  y: number;
  w: number;
  h: number;
  score: number;
}

export interface DetectionsResponse {
  type: "detections";
  id: number;
  detections: DetectionBox[];
}

export interface ErrorResponse {
  type: "error";
  id: number | null;
  message: string;
}

export type Response = HelloMessage | DetectionsResponse | ErrorResponse;

/** Raised for lines that do not form a valid request; carries the id if one
 * could still be recovered so the error response can reference it. */
export class ProtocolError extends Error {
  readonly id: number | null;

  constructor(message: string, id: number | null = null) {
    super(message);
    this.id = id;
  }
}

function recoverId(value: unknown): number | null {
  if (typeof value === "object" && value !== null) {
    const id = (value as { id?: unknown }).id;
    if (typeof id === "number" && Number.isFinite(id)) return id;
  }
  return null;
}

/**
 * Parse one request line. Throws ProtocolError (with a best-effort id) for
 * anything that is not a well-formed hello, detect, or shutdown message.
 */
export function parseRequest(line: string): Request {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch {
    throw new ProtocolError("request line is not valid JSON");
  }
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new ProtocolError("request is not a JSON object", null);
  }
  const msg = value as Record<string, unknown>;
  const id = recoverId(msg);

  switch (msg.type) {
    case "hello": {
      if (msg.version !== PROTOCOL_VERSION) {
        throw new ProtocolError(`unsupported protocol version ${String(msg.version)}`, id);
      }
      return { type: "hello", version: PROTOCOL_VERSION };
    }
    case "shutdown":
      return { type: "shutdown" };
    case "detect": {
      if (id === null) throw new ProtocolError("detect request has no numeric id", id);
      for (const field of ["width", "height", "channels"] as const) {
        if (typeof msg[field] !== "number" || !Number.isFinite(msg[field] as number)) {
          throw new ProtocolError(`detect request field ${field} must be a number`, id);
        }
      }
      if (msg.format !== "png-base64") {
        throw new ProtocolError(`unsupported image format ${String(msg.format)}`, id);
      }
      if (typeof msg.data !== "string") {
        throw new ProtocolError("detect request field data must be a string", id);
      }
      return {
        type: "detect",
        id,
        width: msg.width as number,
        height: msg.height as number,
        channels: msg.channels as number,
        format: msg.format,
        data: msg.data,
      };
    }
    default:
      throw new ProtocolError(`unknown request type ${String(msg.type)}`, id);
  }
}

export function serialize(message: Response): string {
  return JSON.stringify(message) + "\n";
}
