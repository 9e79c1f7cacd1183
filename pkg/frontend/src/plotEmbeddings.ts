/**
 * Embed a feature export to 2-D and render the class-colored scatter.
 *
 * Usage:
 *   npm run plot -- --features <features.csv> --out <plot.png> \
 *       [--method tsne|pca] [--seed 1] [--max-points 500]
 */
import * as path from "path";
import { readFeaturesCsv } from "./features";
import { embed, EmbeddingMethod } from "./embeddings";
import { writeScatterPng } from "./plot";

export interface PlotArgs {
    featuresCsv: string;
    outPng: string;
    method: EmbeddingMethod;
    seed: number;
    maxPoints: number;
}

export function plotEmbeddings(args: PlotArgs): { points: number; classes: number } {
    const features = readFeaturesCsv(args.featuresCsv);
    // deterministic subsample: evenly strided to keep class balance roughly intact
    const total = features.vectors.length;
    const step = Math.max(1, Math.ceil(total / args.maxPoints));
    const keep: number[] = [];
    for (let i = 0; i < total; i += step) keep.push(i);

    const coords = embed(keep.map((i) => features.vectors[i]), args.method, args.seed);
    const labels = keep.map((i) => features.labels[i]);
    writeScatterPng({
        xs: coords.map((c) => c[0]),
        ys: coords.map((c) => c[1]),
        labels,
    }, args.outPng);
    return { points: keep.length, classes: new Set(labels).size };
}

function parseArgs(argv: string[]): PlotArgs {
    const get = (flag: string, fallback?: string): string => {
        const i = argv.indexOf(flag);
        if (i >= 0 && i + 1 < argv.length) return argv[i + 1];
        if (fallback !== undefined) return fallback;
        throw new Error(`missing required flag ${flag}`);
    };
    const method = get("--method", "tsne");
    if (method !== "tsne" && method !== "pca") {
        throw new Error(`--method must be tsne or pca, got ${method}`);
    }
    return {
        featuresCsv: get("--features"),
        outPng: get("--out"),
        method,
        seed: Number(get("--seed", "1")),
        maxPoints: Number(get("--max-points", "500")),
    };
}

const isMain = process.argv[1] !== undefined &&
    path.resolve(process.argv[1]).includes("plotEmbeddings");
if (isMain) {
    try {
        const { points, classes } = plotEmbeddings(parseArgs(process.argv.slice(2)));
        console.log(`embedded ${points} points (${classes} classes)`);
    } catch (err) {
        console.error(`harness plot: ${(err as Error).message}`);
        process.exit(1);
    }
}
