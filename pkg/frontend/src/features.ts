import * as fs from "fs";
import { splitCsvLine } from "./manifest";

export interface FeatureSet {
    labels: number[];
    waveforms: string[];
    days: string[];
    vectors: number[][];   // one row per example
}

/** Parse a feature export: label,waveform,day,f0..f{H-1}. */
export function readFeaturesCsv(file: string): FeatureSet {
    const lines = fs.readFileSync(file, "utf-8").split(/\r?\n/).filter((l) => l.length > 0);
    if (lines.length === 0) {
        throw new Error(`${file}: empty feature file`);
    }
    const header = splitCsvLine(lines[0]);
    if (header[0] !== "label" || header[1] !== "waveform" || header[2] !== "day") {
        throw new Error(`${file}: unexpected header ${lines[0]}`);
    }
    if (lines.length === 1) {
        throw new Error(`${file}: feature file has a header but no rows`);
    }
    const out: FeatureSet = { labels: [], waveforms: [], days: [], vectors: [] };
    for (let i = 1; i < lines.length; i++) {
        const cells = splitCsvLine(lines[i]);
        if (cells.length !== header.length) {
            throw new Error(`${file}:${i + 1}: expected ${header.length} fields`);
        }
        out.labels.push(Number(cells[0]));
        out.waveforms.push(cells[1]);
        out.days.push(cells[2]);
        out.vectors.push(cells.slice(3).map(Number));
    }
    return out;
}
