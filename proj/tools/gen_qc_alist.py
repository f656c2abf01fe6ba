#!/usr/bin/env python3
"""Expand a quasi-cyclic base matrix into an alist file.

Base matrices use the dual-diagonal parity structure of the 648-bit
(Z = 27) WLAN-style codes. Entries are circulant shifts, -1 is the zero block.
"""
import argparse
import sys

import numpy as np

Z = 27

BASE = {
    "r12": [
        "0 -1 -1 -1 0 0 -1 -1 0 -1 -1 0 1 0 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1",
        "22 0 -1 -1 17 -1 0 0 12 -1 -1 -1 -1 0 0 -1 -1 -1 -1 -1 -1 -1 -1 -1",
        "6 -1 0 -1 10 -1 -1 -1 24 -1 0 -1 -1 -1 0 0 -1 -1 -1 -1 -1 -1 -1 -1",
        "2 -1 -1 0 20 -1 -1 -1 25 0 -1 -1 -1 -1 -1 0 0 -1 -1 -1 -1 -1 -1 -1",
        "23 -1 -1 -1 3 -1 -1 -1 0 -1 9 11 -1 -1 -1 -1 0 0 -1 -1 -1 -1 -1 -1",
        "24 -1 23 1 17 -1 3 -1 10 -1 -1 -1 -1 -1 -1 -1 -1 0 0 -1 -1 -1 -1 -1",
        "25 -1 -1 -1 8 -1 -1 -1 7 18 -1 -1 0 -1 -1 -1 -1 -1 0 0 -1 -1 -1 -1",
        "13 24 -1 -1 0 -1 8 -1 6 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1 0 0 -1 -1 -1",
        "7 20 -1 16 22 10 -1 -1 23 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1 0 0 -1 -1",
        "11 -1 -1 -1 19 -1 -1 -1 13 -1 3 17 -1 -1 -1 -1 -1 -1 -1 -1 -1 0 0 -1",
        "25 -1 8 -1 23 18 -1 14 9 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1 0 0",
        "3 -1 -1 -1 16 -1 -1 2 25 5 -1 -1 1 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1 0",
    ],
    "r23": [
        "25 26 14 -1 20 -1 2 -1 4 -1 -1 8 -1 16 -1 18 1 0 -1 -1 -1 -1 -1 -1",
        "10 9 15 11 -1 0 -1 1 -1 -1 18 -1 8 -1 10 -1 -1 0 0 -1 -1 -1 -1 -1",
        "16 2 20 26 21 -1 6 -1 1 26 -1 7 -1 -1 -1 -1 -1 -1 0 0 -1 -1 -1 -1",
        "10 13 5 0 -1 3 -1 7 -1 -1 26 -1 -1 13 -1 16 -1 -1 -1 0 0 -1 -1 -1",
        "23 14 24 -1 12 -1 19 -1 17 -1 -1 -1 20 -1 21 -1 0 -1 -1 -1 0 0 -1 -1",
        "6 22 9 20 -1 25 -1 17 -1 8 -1 14 -1 18 -1 -1 -1 -1 -1 -1 -1 0 0 -1",
        "14 23 21 11 20 -1 24 -1 18 -1 19 -1 -1 -1 -1 22 -1 -1 -1 -1 -1 -1 0 0",
        "17 11 11 20 -1 21 -1 26 -1 3 -1 -1 18 -1 26 -1 1 -1 -1 -1 -1 -1 -1 0",
    ],
}


def expand(rows):
    base = np.array([[int(v) for v in r.split()] for r in rows])
    mb, nb = base.shape
    h = np.zeros((mb * Z, nb * Z), dtype=np.uint8)
    eye = np.eye(Z, dtype=np.uint8)
    for i in range(mb):
        for j in range(nb):
            s = base[i, j]
            if s >= 0:
                h[i * Z:(i + 1) * Z, j * Z:(j + 1) * Z] = np.roll(eye, s, axis=1)
    return h


def gf2_rank(h):
    a = h.copy()
    rank = 0
    for c in range(a.shape[1]):
        piv = np.nonzero(a[rank:, c])[0]
        if piv.size == 0:
            continue
        p = rank + piv[0]
        a[[rank, p]] = a[[p, rank]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != rank]
        a[others] ^= a[rank]
        rank += 1
        if rank == a.shape[0]:
            break
    return rank


def write_alist(h, out):
    m, n = h.shape
    cols = [np.nonzero(h[:, j])[0] + 1 for j in range(n)]
    rows = [np.nonzero(h[i])[0] + 1 for i in range(m)]
    mc = max(len(c) for c in cols)
    mr = max(len(r) for r in rows)
    out.write(f"{n} {m}\n{mc} {mr}\n")
    out.write(" ".join(str(len(c)) for c in cols) + "\n")
    out.write(" ".join(str(len(r)) for r in rows) + "\n")
    for c in cols:
        out.write(" ".join(str(v) for v in list(c) + [0] * (mc - len(c))) + "\n")
    for r in rows:
        out.write(" ".join(str(v) for v in list(r) + [0] * (mr - len(r))) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("rate", choices=sorted(BASE))
    ap.add_argument("output")
    args = ap.parse_args()
    h = expand(BASE[args.rate])
    rank = gf2_rank(h)
    print(f"{args.rate}: {h.shape[0]}x{h.shape[1]}, GF(2) rank {rank}", file=sys.stderr)
    if rank != h.shape[0]:
        sys.exit("parity-check matrix is rank deficient")
    with open(args.output, "w") as f:
        write_alist(h, f)


if __name__ == "__main__":
    main()
