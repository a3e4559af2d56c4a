#!/usr/bin/env python3
"""Writes the committed MPW1 fixture and reference outputs for the forward-pass test.

The forward pass here is an independent NumPy implementation of the same
architecture, computed in float64 from float32 parameters:

  input_embed 1x1 3->1 (no bias, linear)
  9 encoder convs 3x3 (ReLU), stride 2 at encoder layers 3, 6, 9
  9 decoder layers: transposed 3x3 stride 2 at decoder layers 1, 4, 7
      (output += activation that entered the mirrored stride-2 conv, then ReLU),
      plain 3x3 convs (ReLU) elsewhere; the last one gets the embedded input
      appended as an extra channel
  output_head 1x1 ->1, sigmoid

Usage: make_nn_fixture.py OUT_DIR
"""
import struct
import sys
import zlib
from pathlib import Path

import numpy as np

HEIGHT, WIDTH, HIDDEN = 12, 10, 4
SEED = 20240601
INPUTS = 3

# kind, in, out, kh, kw, stride, bias, stacks, skip
def layer_table(hidden):
    layers = [(0, 3, 1, 1, 1, 1, False, False, False)]
    for e in range(9):
        layers.append((1, 1 if e == 0 else hidden, hidden, 3, 3, 2 if e % 3 == 2 else 1,
                       True, False, False))
    for d in range(9):
        up = d % 3 == 0
        last = d == 8
        layers.append((2 if up else 1, hidden + (1 if last else 0), hidden, 3, 3,
                       2 if up else 1, True, last, up))
    layers.append((3, hidden, 1, 1, 1, 1, True, False, False))
    return layers


def conv2d(x, kernel, bias, stride):
    c_in, h, w = x.shape
    c_out, _, kh, kw = kernel.shape
    ph, pw = kh // 2, kw // 2
    xp = np.zeros((c_in, h + 2 * ph, w + 2 * pw))
    xp[:, ph:ph + h, pw:pw + w] = x
    oh, ow = -(-h // stride), -(-w // stride)
    out = np.zeros((c_out, oh, ow))
    for y in range(oh):
        for xx in range(ow):
            patch = xp[:, y * stride:y * stride + kh, xx * stride:xx * stride + kw]
            out[:, y, xx] = np.tensordot(kernel, patch, axes=([1, 2, 3], [0, 1, 2]))
    if bias is not None:
        out += bias[:, None, None]
    return out


def transposed_conv2d(x, kernel, bias, stride, oh, ow):
    c_in, h, w = x.shape
    _, c_out, kh, kw = kernel.shape
    ph, pw = kh // 2, kw // 2
    out = np.zeros((c_out, oh, ow))
    for y in range(h):
        for xx in range(w):
            for ky in range(kh):
                for kx in range(kw):
                    oy, ox = y * stride + ky - ph, xx * stride + kx - pw
                    if 0 <= oy < oh and 0 <= ox < ow:
                        out[:, oy, ox] += kernel[:, :, ky, kx].T @ x[:, y, xx]
    if bias is not None:
        out += bias[:, None, None]
    return out


def forward(layers, params, onehot):
    x = onehot.astype(np.float64)
    embedded = None
    saved = []
    for spec, (kernel, bias) in zip(layers, params):
        kind, _, _, _, _, stride, _, stacks, skip = spec
        if stacks:
            x = np.concatenate([x, embedded], axis=0)
        if kind == 0:
            x = conv2d(x, kernel, None, 1)
            embedded = x
        elif kind == 1:
            if stride > 1:
                saved.append(x)
            x = np.maximum(conv2d(x, kernel, bias, stride), 0.0)
        elif kind == 2:
            skip_act = saved.pop()
            x = transposed_conv2d(x, kernel, bias, stride, skip_act.shape[1], skip_act.shape[2])
            if skip:
                x = x + skip_act
            x = np.maximum(x, 0.0)
        else:
            x = conv2d(x, kernel, bias, 1)
    return 1.0 / (1.0 + np.exp(-x[0]))


def encode_mpw1(layers, params):
    out = bytearray(b"MPW1")
    out += struct.pack("<IIII", 1, len(layers), HEIGHT, WIDTH)
    for kind, cin, cout, kh, kw, stride, bias, stacks, skip in layers:
        flags = (1 if bias else 0) | (2 if stacks else 0) | (4 if skip else 0)
        out += struct.pack("<BHHBBBB", kind, cin, cout, kh, kw, stride, flags)
    for kernel, bias in params:
        out += kernel.astype("<f4").tobytes()
        if bias is not None:
            out += bias.astype("<f4").tobytes()
    out += struct.pack("<I", zlib.crc32(bytes(out)) & 0xFFFFFFFF)
    return bytes(out)


def main():
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)
    rng = np.random.default_rng(SEED)
    layers = layer_table(HIDDEN)
    params = []
    for kind, cin, cout, kh, kw, _, bias, _, _ in layers:
        shape = (cin, cout, kh, kw) if kind == 2 else (cout, cin, kh, kw)
        kernel = rng.normal(0.0, 0.35, size=shape).astype(np.float32)
        b = rng.normal(0.0, 0.1, size=(cout,)).astype(np.float32) if bias else None
        params.append((kernel, b))
    (out_dir / "tiny_net.mpw1").write_bytes(encode_mpw1(layers, params))

    symbols = ".#?"
    lines = []
    for i in range(INPUTS):
        cats = rng.integers(0, 3, size=(HEIGHT, WIDTH))
        grid = "".join("".join(symbols[c] for c in row) + "\n" for row in cats)
        (out_dir / f"tiny_input_{i}.grid").write_text(grid)
        onehot = np.stack([(cats == k).astype(np.float64) for k in range(3)])
        prob = forward(layers, params, onehot)
        lines.append(" ".join(f"{v:.9e}" for v in prob.ravel()))
    (out_dir / "tiny_expected.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
