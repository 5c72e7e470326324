import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** Fresh scratch directory for one test file. */
export function scratchDir(prefix: string): string {
  return mkdtempSync(join(tmpdir(), prefix));
}

export interface ScenarioOptions {
  designs?: string[];
  realizations?: number;
  snrGridDb?: number[];
  eigCount?: number;
}

/**
 * Write a small, fully regular scenario directory with smooth synthetic
 * curves.  Values are exact simple expressions so tests stay readable.
 */
export function writeScenario(dir: string, options: ScenarioOptions = {}): void {
  const designs = options.designs ??
    ["RAND", "OPT-DIAG", "OPT-DIAG-PH", "OPT-GEN", "OPT-GEN-PH"];
  const realizations = options.realizations ?? 8;
  const snrGridDb = options.snrGridDb ?? [-20, -10, 0, 10, 20, 30];
  const eigCount = options.eigCount ?? 12;

  const power = ["realization,design,sigma2_f"];
  designs.forEach((design, d) => {
    for (let r = 0; r < realizations; r++) {
      power.push(`${r},${design},${100 * (d + 1) + r}`);
    }
  });
  writeFileSync(join(dir, "power.csv"), power.join("\n") + "\n");

  const capacity = ["design,snr_db,capacity_bits"];
  designs.forEach((design, d) => {
    for (const snr of snrGridDb) {
      capacity.push(`${design},${snr}.0,${(snr + 21) * (1 + d / 4)}`);
    }
  });
  writeFileSync(join(dir, "capacity.csv"), capacity.join("\n") + "\n");

  const eigs = ["design,index,mean_eigenvalue"];
  designs.forEach((design, d) => {
    for (let i = 1; i <= eigCount; i++) {
      eigs.push(`${design},${i},${(10 ** (2 - i + d / 8)).toExponential(6)}`);
    }
  });
  writeFileSync(join(dir, "eigs.csv"), eigs.join("\n") + "\n");
}
