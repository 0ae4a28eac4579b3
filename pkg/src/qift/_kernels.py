"""Compiled hot loops. All kernels release the GIL so callers can fan out threads."""

import numba as nb
import numpy as np
from llvmlite import ir
from numba import types
from numba.extending import intrinsic

# Above this order the per-y histogram would be too wide; fall back to direct sums.
MAX_HIST_ORDER = 16


@intrinsic
def _ctpop(typingctx, x):
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        fn = builder.module.declare_intrinsic("llvm.ctpop", [ir.IntType(64)])
        return builder.call(fn, args)

    return sig, codegen


@nb.njit(cache=True, nogil=True)
def popcount(x):
    return _ctpop(np.uint64(x))


def _make_rev16():
    tab = np.zeros(1 << 16, dtype=np.uint64)
    for v in range(1 << 16):
        tab[v] = int(format(v, "016b")[::-1], 2)
    return tab


_REV16 = _make_rev16()


@nb.njit(cache=True, nogil=True)
def reverse_bits(y, n, tab):
    v = np.uint64(y)
    out = (
        (tab[v & np.uint64(0xFFFF)] << np.uint64(48))
        | (tab[(v >> np.uint64(16)) & np.uint64(0xFFFF)] << np.uint64(32))
        | (tab[(v >> np.uint64(32)) & np.uint64(0xFFFF)] << np.uint64(16))
        | tab[v >> np.uint64(48)]
    )
    return out >> np.uint64(64 - n)


@nb.njit(cache=True, nogil=True)
def _phase(x, z, m, modified, n):
    q = np.uint64(0)
    top = min(m, n)
    for s in range(top):
        q += popcount(x & (z >> np.uint64(s))) << np.uint64(m - 1 - s)
    if modified and m < n:
        q += popcount(x & (z >> np.uint64(m)))
    return q


@nb.njit(cache=True, nogil=True)
def phase_histograms(ys, n, x0, r, count, m, modified, tab):
    """Counts of phase classes ``q mod 2^m`` over ``x = x0 + j*r``, one row per y."""
    width = 1 << m
    mask = np.uint64(width - 1)
    out = np.zeros((ys.shape[0], width), dtype=np.int64)
    step = np.uint64(r)
    for row in range(ys.shape[0]):
        z = reverse_bits(ys[row], n, tab)
        x = np.uint64(x0)
        for _ in range(count):
            out[row, _phase(x, z, m, modified, n) & mask] += 1
            x += step
    return out


@nb.njit(cache=True, nogil=True)
def amplitude_sums(ys, n, x0, r, count, m, modified, exact, tab):
    """Complex sums ``sum_j exp(2*pi*i*q_j / 2^order)`` without binning.

    Used for orders too wide to histogram. ``exact`` selects the full
    ``x*y mod 2^n`` phase (uint64 products wrap mod 2^64, which is harmless
    after masking).
    """
    out = np.zeros(ys.shape[0], dtype=np.complex128)
    step = np.uint64(r)
    if exact:
        order = n
    else:
        order = m
    mask = np.uint64((1 << order) - 1)
    scale = 2.0 * np.pi / (1 << order)
    for row in range(ys.shape[0]):
        y = np.uint64(ys[row])
        z = reverse_bits(ys[row], n, tab)
        x = np.uint64(x0)
        re = 0.0
        im = 0.0
        for _ in range(count):
            if exact:
                q = (x * y) & mask
            else:
                q = _phase(x, z, m, modified, n) & mask
            ang = scale * float(q)
            re += np.cos(ang)
            im += np.sin(ang)
            x += step
        out[row] = re + 1j * im
    return out


@nb.njit(cache=True, nogil=True)
def load_indicator_int(re, x0, r):
    """Unnormalised periodic state: 1 at x0, x0 + r, ... below len(re)."""
    x = x0
    while x < re.shape[0]:
        re[x] = 1
        x += r


@nb.njit(cache=True, nogil=True)
def butterfly_integral(re, im, n):
    """In-place integral transform on Gaussian-integer amplitudes.

    Stage i sums over input bit x_i and writes output bit y_{n-1-i} into the
    same position, so the result is stored at bit-reversed y. On the x_i = 1
    branch the two previously written output bits directly above position i
    each contribute a factor i (retained term and doubled extra term), and
    the new output bit contributes -1.
    """
    for i in range(n - 1, -1, -1):
        half = 1 << i
        block = half << 1
        for start in range(0, 1 << n, block):
            u = start >> (i + 1)
            phi = (u & 1) + ((u >> 1) & 1)
            for idx in range(start, start + half):
                ar = re[idx]
                ai = im[idx]
                br = re[idx + half]
                bi = im[idx + half]
                if phi == 1:
                    br, bi = -bi, br
                elif phi == 2:
                    br, bi = -br, -bi
                re[idx] = ar + br
                im[idx] = ai + bi
                re[idx + half] = ar - br
                im[idx + half] = ai - bi


@nb.njit(cache=True, nogil=True)
def butterfly_truncated(amp, n, m, modified):
    """In-place plain or modified AQFT(m) on complex amplitudes (bit-reversed output)."""
    width = 1 << m
    twiddle = np.empty(width, dtype=np.complex128)
    for low in range(width):
        phi = 0
        for s in range(1, m):
            phi += ((low >> (s - 1)) & 1) << (m - 1 - s)
        if modified:
            phi += (low >> (m - 1)) & 1
        ang = 2.0 * np.pi * (phi % width) / width
        twiddle[low] = np.cos(ang) + 1j * np.sin(ang)
    mask = width - 1
    for i in range(n - 1, -1, -1):
        half = 1 << i
        block = half << 1
        for start in range(0, 1 << n, block):
            w = twiddle[(start >> (i + 1)) & mask]
            for idx in range(start, start + half):
                a = amp[idx]
                t = amp[idx + half] * w
                amp[idx] = a + t
                amp[idx + half] = a - t


@nb.njit(cache=True, nogil=True)
def gaussian_norms_in_order(re, im, n, tab):
    """``re^2 + im^2`` re-indexed from bit-reversed to natural y order."""
    size = 1 << n
    out = np.empty(size, dtype=np.int64)
    for idx in range(size):
        a = np.int64(re[idx])
        b = np.int64(im[idx])
        out[reverse_bits(idx, n, tab)] = a * a + b * b
    return out


@nb.njit(cache=True, nogil=True)
def complex_norms_in_order(amp, n, tab):
    size = 1 << n
    out = np.empty(size, dtype=np.float64)
    for idx in range(size):
        v = amp[idx]
        out[reverse_bits(idx, n, tab)] = v.real * v.real + v.imag * v.imag
    return out


@nb.njit(cache=True, nogil=True)
def gaussian_threshold_scan(re, im, n, limit, tab):
    """Natural-order y values with ``|amp|^2 > limit``, plus the exact total ``sum |amp|^2``."""
    size = 1 << n
    hits = []
    norms = []
    total = np.int64(0)
    for idx in range(size):
        a = np.int64(re[idx])
        b = np.int64(im[idx])
        v = a * a + b * b
        total += v
        if v > limit:
            hits.append(np.int64(reverse_bits(idx, n, tab)))
            norms.append(v)
    return hits, norms, total


def rev16_table():
    return _REV16


@nb.njit(cache=True, nogil=True)
def phase_grid(n, m, modified, exact, tab):
    """``Q[x, y]`` for every pair of n-bit words."""
    size = 1 << n
    out = np.empty((size, size), dtype=np.int64)
    if exact:
        mask = np.uint64(size - 1)
    else:
        mask = np.uint64((1 << m) - 1)
    for y in range(size):
        z = reverse_bits(y, n, tab)
        for x in range(size):
            if exact:
                out[x, y] = np.int64((np.uint64(x) * np.uint64(y)) & mask)
            else:
                out[x, y] = np.int64(_phase(np.uint64(x), z, m, modified, n) & mask)
    return out


# Histogram orders handled by histogram_norms; its scratch row holds 2^order counts.
MAX_SCRATCH_ORDER = 20
# Up to this many occupied phase classes the pairwise form is used.
PAIRWISE_LIMIT = 64


@nb.njit(cache=True, nogil=True)
def histogram_norms(ys, n, x0, r, count, m, modified, exact, tab, cos, sin):
    """``|S(y)|^2`` per y from an exact phase-class histogram.

    With few occupied classes the value is ``sum c_a^2 + 2 sum_{a<b} c_a c_b
    cos(2*pi*(b-a)/M)``: the diagonal is an exact integer, so a histogram
    concentrated in one class gives exactly ``A^2``. Otherwise the amplitude
    is formed from the cos/sin grid.
    """
    if exact:
        order = n
    else:
        order = m
    width = 1 << order
    mask = np.uint64(width - 1)
    scratch = np.zeros(width, dtype=np.int64)
    occupied = np.empty(min(width, count), dtype=np.int64)
    out = np.empty(ys.shape[0], dtype=np.float64)
    step = np.uint64(r)
    for row in range(ys.shape[0]):
        y = np.uint64(ys[row])
        z = reverse_bits(ys[row], n, tab)
        x = np.uint64(x0)
        k = 0
        for _ in range(count):
            if exact:
                q = np.int64((x * y) & mask)
            else:
                q = np.int64(_phase(x, z, m, modified, n) & mask)
            if scratch[q] == 0:
                occupied[k] = q
                k += 1
            scratch[q] += 1
            x += step
        if k <= PAIRWISE_LIMIT:
            diag = np.int64(0)
            cross = 0.0
            for a in range(k):
                ca = scratch[occupied[a]]
                diag += ca * ca
                for b in range(a + 1, k):
                    d = (occupied[b] - occupied[a]) & (width - 1)
                    cross += float(ca * scratch[occupied[b]]) * cos[d]
            out[row] = float(diag) + 2.0 * cross
        else:
            re = 0.0
            im = 0.0
            for a in range(k):
                c = float(scratch[occupied[a]])
                re += c * cos[occupied[a]]
                im += c * sin[occupied[a]]
            out[row] = re * re + im * im
        for a in range(k):
            scratch[occupied[a]] = 0
    return out
