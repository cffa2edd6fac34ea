/**
 * Reference detector worker for the tracking package's external-detector
 * client. Reads newline-delimited JSON requests on stdin, writes responses
 * on stdout, and exits 0 on a shutdown message or EOF.
 *
 *     node dist/worker.js --mode echo --bbox 10,10,6,6 --score 0.9
 *     node dist/worker.js --mode template --radius 8
 *
 * Echo mode answers every detect with the configured box; template mode
 * decodes the patch and runs disk-template matching on it.
 */

import { once } from "node:events";
import { createInterface } from "node:readline";
import { parseArgs } from "node:util";
import type { Readable, Writable } from "node:stream";

import {
  DetectionBox,
  PROTOCOL_VERSION,
  ProtocolError,
  Response,
  parseRequest,
  serialize,
} from "./protocol";
import { decodeGray } from "./png";
import { DiskTemplate, makeDiskTemplate, templateDetect } from "./template";

export const WORKER_NAME = "golftrack-bridge";

export interface WorkerConfig {
  mode: "echo" | "template";
  echoBbox: DetectionBox;
  templateRadius: number;
}

export const DEFAULT_CONFIG: WorkerConfig = {
  mode: "echo",
  echoBbox: { x: 0, y: 0, w: 16, h: 16, score: 0.9 },
  templateRadius: 8,
};

function parseBbox(text: string, score: number): DetectionBox {
  const parts = text.split(",").map((p) => Number(p.trim()));
  if (parts.length !== 4 || parts.some((v) => !Number.isFinite(v))) {
    throw new Error(`--bbox expects x,y,w,h with numeric fields, got ${JSON.stringify(text)}`);
  }
  if (parts[2] <= 0 || parts[3] <= 0) {
    throw new Error(`--bbox width and height must be positive, got ${JSON.stringify(text)}`);
  }
  return { x: parts[0], y: parts[1], w: parts[2], h: parts[3], score };
}

export function configFromArgv(argv: string[]): WorkerConfig {
  const { values } = parseArgs({
    args: argv,
    options: {
      mode: { type: "string", default: DEFAULT_CONFIG.mode },
      bbox: { type: "string", default: "0,0,16,16" },
      score: { type: "string", default: "0.9" },
      radius: { type: "string", default: String(DEFAULT_CONFIG.templateRadius) },
    },
  });
  if (values.mode !== "echo" && values.mode !== "template") {
    throw new Error(`--mode must be echo or template, got ${JSON.stringify(values.mode)}`);
  }
  const score = Number(values.score);
  if (!(score >= 0 && score <= 1)) {
    throw new Error(`--score must be in [0, 1], got ${JSON.stringify(values.score)}`);
  }
  const radius = Number(values.radius);
  if (!(radius >= 1.5)) {
    throw new Error(`--radius must be >= 1.5, got ${JSON.stringify(values.radius)}`);
  }
  return {
    mode: values.mode,
    echoBbox: parseBbox(values.bbox as string, score),
    templateRadius: radius,
  };
}

function answerDetect(
  id: number,
  data: string,
  config: WorkerConfig,
  template: DiskTemplate,
): Response {
  if (config.mode === "echo") {
    return { type: "detections", id, detections: [config.echoBbox] };
  }
  let detections: DetectionBox[];
  try {
    detections = templateDetect(decodeGray(data), template);
  } catch (err) {
    return { type: "error", id, message: err instanceof Error ? err.message : String(err) };
  }
  return { type: "detections", id, detections };
}

/**
 * Run the request loop: hello first, then one response per request line, in
 * order. Malformed lines draw an error response (with the request id when it
 * can be recovered) and the loop continues. Resolves with the exit code when
 * a shutdown message or EOF arrives.
 */
export async function serve(
  input: Readable,
  output: Writable,
  config: WorkerConfig = DEFAULT_CONFIG,
): Promise<number> {
  const template = makeDiskTemplate(config.templateRadius);

  const write = async (message: Response) => {
    if (!output.write(serialize(message))) {
      await once(output, "drain");
    }
  };

  await write({ type: "hello", version: PROTOCOL_VERSION, name: WORKER_NAME });

  const lines = createInterface({ input, crlfDelay: Infinity });
  for await (const line of lines) {
    if (line.trim() === "") continue;
    let request;
    try {
      request = parseRequest(line);
    } catch (err) {
      const id = err instanceof ProtocolError ? err.id : null;
      const message = err instanceof Error ? err.message : String(err);
      await write({ type: "error", id, message });
      continue;
    }
    if (request.type === "hello") continue;
    if (request.type === "shutdown") return 0;
    await write(answerDetect(request.id, request.data, config, template));
  }
  return 0;
}

export async function main(argv: string[]): Promise<number> {
  let config: WorkerConfig;
  try {
    config = configFromArgv(argv);
  } catch (err) {
    process.stderr.write(`${err instanceof Error ? err.message : String(err)}\n`);
    return 2;
  }
  return serve(process.stdin, process.stdout, config);
}

if (require.main === module) {
  main(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (err) => {
      process.stderr.write(`fatal: ${err instanceof Error ? err.stack : String(err)}\n`);
      process.exit(1);
    },
  );
}
