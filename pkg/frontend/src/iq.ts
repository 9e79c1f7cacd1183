import * as fs from "fs";
import * as path from "path";
import { Manifest, ManifestRecord } from "./manifest";

/** One complex recording as separate I/Q planes. */
export interface IqRecording {
    i: Float64Array;
    q: Float64Array;
}

export interface Window {
    i: Float64Array;   // unit mean power
    q: Float64Array;
    label: number;
    waveform: string;
    day: string;
}

export function readIqBin(filePath: string): IqRecording {
    const buf = fs.readFileSync(filePath);
    if (buf.length % 8 !== 0) {
        throw new Error(`${filePath}: truncated I/Q record (${buf.length} bytes)`);
    }
    const floats = new Float32Array(buf.buffer, buf.byteOffset, buf.length / 4);
    const n = floats.length / 2;
    const i = new Float64Array(n);
    const q = new Float64Array(n);
    for (let k = 0; k < n; k++) {
        i[k] = floats[2 * k];
        q[k] = floats[2 * k + 1];
    }
    return { i, q };
}

function normalized(i: Float64Array, q: Float64Array): { i: Float64Array; q: Float64Array } {
    let power = 0;
    for (let k = 0; k < i.length; k++) power += i[k] * i[k] + q[k] * q[k];
    power /= i.length;
    const scale = power > 0 ? 1 / Math.sqrt(power) : 1;
    const ni = new Float64Array(i.length);
    const nq = new Float64Array(q.length);
    for (let k = 0; k < i.length; k++) { ni[k] = i[k] * scale; nq[k] = q[k] * scale; }
    return { i: ni, q: nq };
}

export function sliceWindows(rec: IqRecording, record: ManifestRecord,
                             windowLen: number, stride: number): Window[] {
    const out: Window[] = [];
    if (rec.i.length < windowLen) return out;
    const count = Math.floor((rec.i.length - windowLen) / stride) + 1;
    for (let w = 0; w < count; w++) {
        const start = w * stride;
        const norm = normalized(rec.i.subarray(start, start + windowLen),
                                rec.q.subarray(start, start + windowLen));
        out.push({ i: norm.i, q: norm.q, label: record.txId,
                   waveform: record.waveform, day: record.day });
    }
    return out;
}

export function loadWindows(manifest: Manifest, stride: number,
                            maxPerRecord?: number): Window[] {
    const all: Window[] = [];
    for (const record of manifest.records) {
        const rec = readIqBin(path.join(manifest.root, record.path));
        let windows = sliceWindows(rec, record, manifest.header.windowLen, stride);
        if (maxPerRecord !== undefined) windows = windows.slice(0, maxPerRecord);
        all.push(...windows);
    }
    return all;
}
