import * as fs from "fs";
import * as path from "path";

export interface ManifestHeader {
    formatTag: string;
    numTx: number;
    sampleRateHz: number;
    windowLen: number;
}

export interface ManifestRecord {
    path: string;
    waveform: string;
    txId: number;
    day: string;
    provenance: string;
    policy: string;
    seed: string;
}

export interface Manifest {
    header: ManifestHeader;
    records: ManifestRecord[];
    root: string;
}

const EXPECTED_COLUMNS = "path,waveform,tx_id,day,provenance,policy,seed";
const SUPPORTED_FORMAT = "iqdataset-v1";

/** Minimal CSV line splitter honouring double-quoted fields. */
export function splitCsvLine(line: string): string[] {
    const out: string[] = [];
    let field = "";
    let quoted = false;
    for (let i = 0; i < line.length; i++) {
        const ch = line[i];
        if (quoted) {
            if (ch === '"' && line[i + 1] === '"') { field += '"'; i++; }
            else if (ch === '"') { quoted = false; }
            else { field += ch; }
        } else if (ch === '"') {
            quoted = true;
        } else if (ch === ",") {
            out.push(field); field = "";
        } else {
            field += ch;
        }
    }
    out.push(field);
    return out;
}

export function readManifest(manifestPath: string): Manifest {
    const text = fs.readFileSync(manifestPath, "utf-8");
    const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
    const headerKv: Record<string, string> = {};
    let body = 0;
    while (body < lines.length && lines[body].startsWith("#")) {
        const kv = lines[body].replace(/^#\s*/, "");
        const eq = kv.indexOf("=");
        if (eq < 0) throw new Error(`${manifestPath}:${body + 1}: bad header line`);
        headerKv[kv.slice(0, eq).trim()] = kv.slice(eq + 1).trim();
        body++;
    }
    const header: ManifestHeader = {
        formatTag: headerKv["format"] ?? "",
        numTx: Number(headerKv["num_tx"]),
        sampleRateHz: Number(headerKv["sample_rate_hz"]),
        windowLen: Number(headerKv["window_len"]),
    };
    if (header.formatTag !== SUPPORTED_FORMAT) {
        throw new Error(`${manifestPath}: unsupported format '${header.formatTag}' ` +
            `(this reader understands ${SUPPORTED_FORMAT})`);
    }
    if (!Number.isFinite(header.numTx) || !Number.isFinite(header.sampleRateHz)) {
        throw new Error(`${manifestPath}: missing num_tx/sample_rate_hz header`);
    }
    if (lines[body] !== EXPECTED_COLUMNS) {
        throw new Error(`${manifestPath}:${body + 1}: expected column line '${EXPECTED_COLUMNS}'`);
    }
    const records: ManifestRecord[] = [];
    for (let i = body + 1; i < lines.length; i++) {
        const cells = splitCsvLine(lines[i]);
        if (cells.length !== 7) {
            throw new Error(`${manifestPath}:${i + 1}: expected 7 fields, got ${cells.length}`);
        }
        records.push({
            path: cells[0], waveform: cells[1], txId: Number(cells[2]),
            day: cells[3], provenance: cells[4], policy: cells[5], seed: cells[6],
        });
    }
    return { header, records, root: path.dirname(path.resolve(manifestPath)) };
}
