/**
 * Scatter plots to PNG without a browser: points on a white canvas,
 * class-colored, with a legend drawn in a tiny built-in 5x7 font.
 */
import * as fs from "fs";
import { PNG } from "pngjs";

export interface Rgb { r: number; g: number; b: number; }

export const CLASS_COLORS: Rgb[] = [
    { r: 214, g: 69, b: 65 },    // red
    { r: 31, g: 119, b: 180 },   // blue
    { r: 44, g: 160, b: 44 },    // green
    { r: 148, g: 103, b: 189 },  // purple
    { r: 255, g: 127, b: 14 },   // orange
    { r: 23, g: 190, b: 207 },   // cyan
];

// 5x7 glyphs for the legend text; each entry is 7 rows of 5 bits.
const FONT: Record<string, number[]> = {
    "0": [0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e],
    "1": [0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e],
    "2": [0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f],
    "3": [0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e],
    "4": [0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02],
    "5": [0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e],
    "6": [0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e],
    "7": [0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
    "8": [0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e],
    "9": [0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c],
    "t": [0x08, 0x08, 0x1c, 0x08, 0x08, 0x09, 0x06],
    "x": [0x00, 0x00, 0x11, 0x0a, 0x04, 0x0a, 0x11],
    " ": [0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00],
};

export interface ScatterSpec {
    xs: number[];
    ys: number[];
    labels: number[];
    width?: number;
    height?: number;
    pointRadius?: number;
}

function setPixel(png: PNG, x: number, y: number, c: Rgb): void {
    if (x < 0 || y < 0 || x >= png.width || y >= png.height) return;
    const idx = (png.width * y + x) << 2;
    png.data[idx] = c.r;
    png.data[idx + 1] = c.g;
    png.data[idx + 2] = c.b;
    png.data[idx + 3] = 255;
}

function fillRect(png: PNG, x0: number, y0: number, w: number, h: number, c: Rgb): void {
    for (let y = y0; y < y0 + h; y++) {
        for (let x = x0; x < x0 + w; x++) setPixel(png, x, y, c);
    }
}

function drawDisc(png: PNG, cx: number, cy: number, radius: number, c: Rgb): void {
    for (let dy = -radius; dy <= radius; dy++) {
        for (let dx = -radius; dx <= radius; dx++) {
            if (dx * dx + dy * dy <= radius * radius) setPixel(png, cx + dx, cy + dy, c);
        }
    }
}

export function drawText(png: PNG, x: number, y: number, text: string, c: Rgb): void {
    let cursor = x;
    for (const ch of text) {
        const glyph = FONT[ch] ?? FONT[" "];
        for (let row = 0; row < 7; row++) {
            for (let col = 0; col < 5; col++) {
                if ((glyph[row] >> (4 - col)) & 1) setPixel(png, cursor + col, y + row, c);
            }
        }
        cursor += 6;
    }
}

/** Render a class-colored scatter with a per-class "tx N" legend. */
export function renderScatter(spec: ScatterSpec): PNG {
    const width = spec.width ?? 640;
    const height = spec.height ?? 480;
    const radius = spec.pointRadius ?? 2;
    const png = new PNG({ width, height });
    fillRect(png, 0, 0, width, height, { r: 255, g: 255, b: 255 });

    const margin = 32;
    const xMin = Math.min(...spec.xs), xMax = Math.max(...spec.xs);
    const yMin = Math.min(...spec.ys), yMax = Math.max(...spec.ys);
    const xSpan = xMax - xMin || 1;
    const ySpan = yMax - yMin || 1;
    const toPx = (x: number) => margin + ((x - xMin) / xSpan) * (width - 2 * margin);
    const toPy = (y: number) => height - margin - ((y - yMin) / ySpan) * (height - 2 * margin);

    spec.xs.forEach((x, n) => {
        const color = CLASS_COLORS[spec.labels[n] % CLASS_COLORS.length];
        drawDisc(png, Math.round(toPx(x)), Math.round(toPy(spec.ys[n])), radius, color);
    });

    const classes = [...new Set(spec.labels)].sort((a, b) => a - b);
    const black = { r: 0, g: 0, b: 0 };
    classes.forEach((cls, row) => {
        const y = 8 + row * 12;
        fillRect(png, 8, y, 8, 8, CLASS_COLORS[cls % CLASS_COLORS.length]);
        drawText(png, 20, y, `tx ${cls}`, black);
    });
    return png;
}

export function writeScatterPng(spec: ScatterSpec, file: string): void {
    fs.writeFileSync(file, PNG.sync.write(renderScatter(spec)));
}

export function legendEntryCount(spec: ScatterSpec): number {
    return new Set(spec.labels).size;
}
