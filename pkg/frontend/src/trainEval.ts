/**
 * Train the companion CNN on a day-1 manifest and score day-1 holdout plus
 * day-2, writing results_cnn.csv in the same schema the main toolkit emits.
 *
 * Usage:
 *   npm run train -- --day1 <day1/manifest.csv> --day2 <day2/manifest.csv> \
 *       --out <dir> [--policy name] [--epochs 16] [--stride 128] [--seed 0]
 */
import * as fs from "fs";
import * as path from "path";
import { readManifest } from "./manifest";
import { loadWindows, Window } from "./iq";
import { buildCnn, trainCnn, accuracy, DEFAULT_CNN, CnnConfig } from "./model";

export interface TrainEvalArgs {
    day1Manifest: string;
    day2Manifest: string;
    outDir: string;
    policy: string;
    epochs: number;
    stride: number;
    seed: number;
    valFraction: number;
}

export interface ResultRow {
    policy: string;
    day1Acc: number;
    day2Acc: number;
}

export const RESULTS_SCHEMA = "policy,day1_acc,day2_acc";

/** Deterministic by-record holdout: every (tx, waveform) group donates records. */
export function splitRecords<T extends { txId: number; waveform: string }>(
    records: T[], valFraction: number): { train: T[]; val: T[] } {
    const groups = new Map<string, T[]>();
    for (const r of records) {
        const key = `${r.txId}|${r.waveform}`;
        if (!groups.has(key)) groups.set(key, []);
        groups.get(key)!.push(r);
    }
    const train: T[] = [];
    const val: T[] = [];
    for (const key of [...groups.keys()].sort()) {
        const recs = groups.get(key)!;
        const nVal = Math.max(1, Math.round(valFraction * recs.length));
        recs.forEach((r, i) => (i < recs.length - nVal ? train : val).push(r));
    }
    return { train, val };
}

export async function trainEvalCnn(args: TrainEvalArgs): Promise<ResultRow> {
    const day1 = readManifest(args.day1Manifest);
    const day2 = readManifest(args.day2Manifest);
    if (day1.header.windowLen !== day2.header.windowLen) {
        throw new Error("day1/day2 manifests disagree on window_len");
    }
    const { train, val } = splitRecords(day1.records, args.valFraction);
    const trainWindows = loadWindows({ ...day1, records: train }, Math.max(16, args.stride / 4));
    const valWindows = loadWindows({ ...day1, records: val }, args.stride);
    const day2Windows = loadWindows(day2, args.stride);
    if (trainWindows.length === 0 || valWindows.length === 0 || day2Windows.length === 0) {
        throw new Error("empty window sets; check manifests and stride");
    }

    const cfg: CnnConfig = {
        ...DEFAULT_CNN,
        windowLen: day1.header.windowLen,
        numClasses: day1.header.numTx,
        epochs: args.epochs,
        seed: args.seed,
    };
    const model = buildCnn(cfg);
    await trainCnn(model, trainWindows, cfg);
    const row: ResultRow = {
        policy: args.policy,
        day1Acc: accuracy(model, valWindows),
        day2Acc: accuracy(model, day2Windows),
    };
    fs.mkdirSync(args.outDir, { recursive: true });
    writeResults([row], path.join(args.outDir, "results_cnn.csv"));
    return row;
}

export function writeResults(rows: ResultRow[], file: string): void {
    const lines = [RESULTS_SCHEMA];
    for (const r of rows) {
        lines.push(`${r.policy},${r.day1Acc.toFixed(4)},${r.day2Acc.toFixed(4)}`);
    }
    fs.writeFileSync(file, lines.join("\n") + "\n");
}

function parseArgs(argv: string[]): TrainEvalArgs {
    const get = (flag: string, fallback?: string): string => {
        const i = argv.indexOf(flag);
        if (i >= 0 && i + 1 < argv.length) return argv[i + 1];
        if (fallback !== undefined) return fallback;
        throw new Error(`missing required flag ${flag}`);
    };
    return {
        day1Manifest: get("--day1"),
        day2Manifest: get("--day2"),
        outDir: get("--out"),
        policy: get("--policy", "no_aug"),
        epochs: Number(get("--epochs", "16")),
        stride: Number(get("--stride", "128")),
        seed: Number(get("--seed", "0")),
        valFraction: Number(get("--val-fraction", "0.2")),
    };
}

const isMain = process.argv[1] !== undefined &&
    path.resolve(process.argv[1]).includes("trainEval");
if (isMain) {
    trainEvalCnn(parseArgs(process.argv.slice(2)))
        .then((row) => {
            console.log(`${row.policy}: day1 ${row.day1Acc.toFixed(4)} ` +
                        `day2 ${row.day2Acc.toFixed(4)}`);
        })
        .catch((err) => {
            console.error(`harness train: ${err.message}`);
            process.exit(1);
        });
}
