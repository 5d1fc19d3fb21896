import { execFileSync, spawn, ChildProcess } from "node:child_process";

/** Run a short python snippet against the installed engine package. */
export function python(code: string): string {
  return execFileSync("python3", ["-c", code], { encoding: "utf-8" });
}

export interface EngineHandle {
  proc: ChildProcess;
  host: string;
  port: number;
}

/** Start `suryanet serve` on an ephemeral port and wait for its address. */
export async function startEngine(modelPath: string): Promise<EngineHandle> {
  const proc = spawn("python3", [
    "-m",
    "suryanet.cli",
    "serve",
    "--model",
    modelPath,
    "--listen",
    "127.0.0.1:0",
  ]);
  const address = await new Promise<{ host: string; port: number }>((resolve, reject) => {
    let buf = "";
    proc.stderr!.on("data", (chunk: Buffer) => {
      buf += chunk.toString();
      const m = buf.match(/listening on ([\d.]+):(\d+)/);
      if (m) resolve({ host: m[1], port: Number(m[2]) });
    });
    proc.once("exit", (code) => reject(new Error(`engine exited early (${code}): ${buf}`)));
    setTimeout(() => reject(new Error(`engine did not report an address: ${buf}`)), 15000);
  });
  return { proc, ...address };
}

export function stopEngine(engine: EngineHandle): void {
  engine.proc.kill("SIGTERM");
}
