#!/usr/bin/env node
/**
 * Headless entry points: replay a landmark fixture against a running engine
 * with a terminal HUD, or record SNK1 sequences from a fixture.
 * (A live webcam provider plugs into the same loops in a browser build.)
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { captureLoop, recordSequences } from "./capture.js";
import { FixtureProvider } from "./provider.js";

function parseAddress(addr: string): { host: string; port: number } {
  const idx = addr.lastIndexOf(":");
  return { host: addr.slice(0, idx) || "127.0.0.1", port: Number(addr.slice(idx + 1)) };
}

await yargs(hideBin(process.argv))
  .command(
    "replay <fixture>",
    "stream a recorded landmark fixture to the engine",
    (y) =>
      y
        .positional("fixture", { type: "string", demandOption: true })
        .option("engine", { type: "string", default: "127.0.0.1:7661" })
        .option("realtime", { type: "boolean", default: false })
        .option("json", { type: "boolean", default: false, describe: "print the reply stream as JSON lines" }),
    async (args) => {
      const { host, port } = parseAddress(args.engine);
      const provider = new FixtureProvider(args.fixture, args.realtime);
      const result = await captureLoop(provider, host, port, {
        render: args.json ? undefined : (lines) => console.log(lines.join(" | ")),
      });
      if (args.json) {
        for (const p of result.predictions) {
          console.log(
            JSON.stringify({
              type: "prediction",
              timestamp_ms: p.timestampMs,
              class_index: p.classIndex,
              stable: p.stable,
              probabilities: Array.from(p.probabilities),
            }),
          );
        }
      }
      console.error(`sent ${result.framesSent} frames, got ${result.predictions.length} predictions`);
    },
  )
  .command(
    "record <fixture>",
    "slice a fixture into 10-frame SNK1 training sequences",
    (y) =>
      y
        .positional("fixture", { type: "string", demandOption: true })
        .option("out", { type: "string", demandOption: true })
        .option("class", { type: "string", demandOption: true })
        .option("count", { type: "number", default: 1 }),
    async (args) => {
      const provider = new FixtureProvider(args.fixture);
      const files = await recordSequences(args.out, args.class, args.count, provider);
      for (const f of files) console.log(f);
    },
  )
  .demandCommand(1)
  .strict()
  .parseAsync();
