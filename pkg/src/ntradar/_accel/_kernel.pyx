# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lane of the sampling kernel.

Same algorithm, block for block, as ``pykernel``: Philox4x32-10 streams,
(0, 1] uniforms via ``((w >> 11) + 1) * 2**-53``, Marsaglia polar normals,
4x4 factor transform, per-trial (P1, P2, Rc, Rs) means.  Blocks are generated
four at a time (independent counters, so the multiply chains pipeline) but
consumed strictly in counter order; results are identical to a block-at-a-time
evaluation.  The inner loops release the GIL so trial ranges can run on real
threads.
"""

from libc.math cimport log, sqrt
from libc.stdint cimport uint32_t, uint64_t

import numpy as np

name = "compiled"

cdef extern from *:
    '''
    #include <stdint.h>

    /* Four consecutive Philox4x32-10 blocks, interleaved for ILP; writes the
       two (0,1] uniforms of each block.  Counter order j = 0..3 matches a
       scalar block-at-a-time evaluation exactly. */
    static void ntr_philox_x4(uint64_t blk0, uint64_t stream, uint64_t seed,
                              double *ua, double *ub)
    {
        uint32_t c0[4], c1[4], c2[4], c3[4];
        uint32_t k0 = (uint32_t)seed, k1 = (uint32_t)(seed >> 32);
        int j, r;
        for (j = 0; j < 4; j++) {
            uint64_t b = blk0 + (uint64_t)j;
            c0[j] = (uint32_t)b;
            c1[j] = (uint32_t)(b >> 32);
            c2[j] = (uint32_t)stream;
            c3[j] = (uint32_t)(stream >> 32);
        }
        for (r = 0; r < 10; r++) {
            for (j = 0; j < 4; j++) {
                uint64_t p0 = (uint64_t)0xD2511F53u * (uint64_t)c0[j];
                uint64_t p1 = (uint64_t)0xCD9E8D57u * (uint64_t)c2[j];
                uint32_t t0 = (uint32_t)(p1 >> 32) ^ c1[j] ^ k0;
                uint32_t t1 = (uint32_t)p1;
                uint32_t t2 = (uint32_t)(p0 >> 32) ^ c3[j] ^ k1;
                uint32_t t3 = (uint32_t)p0;
                c0[j] = t0; c1[j] = t1; c2[j] = t2; c3[j] = t3;
            }
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        for (j = 0; j < 4; j++) {
            uint64_t wa = (uint64_t)c0[j] | ((uint64_t)c1[j] << 32);
            uint64_t wb = (uint64_t)c2[j] | ((uint64_t)c3[j] << 32);
            ua[j] = (double)((wa >> 11) + 1) * 0x1p-53;
            ub[j] = (double)((wb >> 11) + 1) * 0x1p-53;
        }
    }
    '''
    void ntr_philox_x4(uint64_t blk0, uint64_t stream, uint64_t seed,
                       double* ua, double* ub) nogil

DEF ZBUF = 512  # per-trial normal buffer (multiple of 8)


cdef inline void _philox_block(uint64_t blk, uint64_t stream, uint64_t seed,
                               uint32_t* o) noexcept nogil:
    cdef uint32_t c0 = <uint32_t>blk
    cdef uint32_t c1 = <uint32_t>(blk >> 32)
    cdef uint32_t c2 = <uint32_t>stream
    cdef uint32_t c3 = <uint32_t>(stream >> 32)
    cdef uint32_t k0 = <uint32_t>seed
    cdef uint32_t k1 = <uint32_t>(seed >> 32)
    cdef uint64_t p0, p1
    cdef uint32_t t0, t1, t2, t3
    cdef int r
    for r in range(10):
        p0 = (<uint64_t>0xD2511F53) * (<uint64_t>c0)
        p1 = (<uint64_t>0xCD9E8D57) * (<uint64_t>c2)
        t0 = (<uint32_t>(p1 >> 32)) ^ c1 ^ k0
        t1 = <uint32_t>p1
        t2 = (<uint32_t>(p0 >> 32)) ^ c3 ^ k1
        t3 = <uint32_t>p0
        c0 = t0
        c1 = t1
        c2 = t2
        c3 = t3
        k0 = k0 + <uint32_t>0x9E3779B9
        k1 = k1 + <uint32_t>0xBB67AE85
    o[0] = c0
    o[1] = c1
    o[2] = c2
    o[3] = c3


cdef inline int _refill(uint64_t seed, uint64_t stream, uint64_t* next_block,
                        double* zbuf, int zcap) noexcept nogil:
    """Polar-filter fresh blocks into zbuf; returns the (even) count written."""
    cdef double ua[4]
    cdef double ub[4]
    cdef double a, b, s, f
    cdef int m = 0
    cdef int j
    while m + 8 <= zcap:
        ntr_philox_x4(next_block[0], stream, seed, ua, ub)
        next_block[0] += 4
        for j in range(4):
            a = 2.0 * ua[j] - 1.0
            b = 2.0 * ub[j] - 1.0
            s = a * a + b * b
            if 0.0 < s < 1.0:
                f = sqrt(-2.0 * log(s) / s)
                zbuf[m] = a * f
                zbuf[m + 1] = b * f
                m += 2
    return m


def philox_raw(seed, stream, nblocks, block_start=0):
    """Flat uint32 view of ``nblocks`` Philox blocks (test hook)."""
    cdef uint64_t sd = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t st = <uint64_t>(stream & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t b0 = <uint64_t>(block_start & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t nb = nblocks
    out = np.empty(4 * nb, dtype=np.uint32)
    cdef uint32_t[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(nb):
            _philox_block(b0 + <uint64_t>i, st, sd, &o[4 * i])
    return out


def normals(seed, stream, count):
    """First ``count`` standard normals of the (seed, stream) sequence."""
    cdef uint64_t sd = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t st = <uint64_t>(stream & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t cnt = count
    out = np.empty(cnt, dtype=np.float64)
    cdef double[::1] o = out
    cdef uint64_t nb = 0
    cdef Py_ssize_t i = 0
    cdef double zbuf[ZBUF]
    cdef int have, take, j
    with nogil:
        while i < cnt:
            have = _refill(sd, st, &nb, zbuf, ZBUF)
            take = have if have < (cnt - i) else <int>(cnt - i)
            for j in range(take):
                o[i + j] = zbuf[j]
            i += take
    return out


def sample_quads(factor, n, seed, stream):
    """n correlated (i1, q1, i2, q2) samples as an (n, 4) array."""
    fac = np.ascontiguousarray(factor, dtype=np.float64)
    cdef double[:, ::1] A = fac
    cdef uint64_t sd = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t st = <uint64_t>(stream & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t nn = n
    out = np.empty((nn, 4), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef uint64_t nb = 0
    cdef Py_ssize_t j
    cdef int i, have, pos, rem, k
    cdef double zbuf[ZBUF]
    cdef double z0, z1, z2, z3
    with nogil:
        have = 0
        pos = 0
        for j in range(nn):
            if pos + 4 > have:
                rem = have - pos
                for k in range(rem):
                    zbuf[k] = zbuf[pos + k]
                have = rem + _refill(sd, st, &nb, &zbuf[rem], ZBUF - rem)
                pos = 0
            z0 = zbuf[pos]
            z1 = zbuf[pos + 1]
            z2 = zbuf[pos + 2]
            z3 = zbuf[pos + 3]
            pos += 4
            for i in range(4):
                o[j, i] = A[i, 0] * z0 + A[i, 1] * z1 + A[i, 2] * z2 + A[i, 3] * z3
    return out


def aux_mean_batch(factor, n, seed, stream_base, trials, sign, out=None):
    """Per-trial means of (P1, P2, Rc, Rs); trial t uses stream_base + t."""
    fac = np.ascontiguousarray(factor, dtype=np.float64)
    cdef double[:, ::1] A = fac
    if out is None:
        out = np.empty((trials, 4), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef uint64_t sd = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t sb = <uint64_t>(stream_base & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t nt = trials
    cdef double sgn = <double>sign
    cdef double a00 = A[0, 0], a01 = A[0, 1], a02 = A[0, 2], a03 = A[0, 3]
    cdef double a10 = A[1, 0], a11 = A[1, 1], a12 = A[1, 2], a13 = A[1, 3]
    cdef double a20 = A[2, 0], a21 = A[2, 1], a22 = A[2, 2], a23 = A[2, 3]
    cdef double a30 = A[3, 0], a31 = A[3, 1], a32 = A[3, 2], a33 = A[3, 3]
    cdef Py_ssize_t t, j
    cdef uint64_t nb, stream
    cdef double zbuf[ZBUF]
    cdef int have, pos, rem, k
    cdef double z0, z1, z2, z3
    cdef double i1, q1, i2, q2, p1s, p2s, rcs, rss
    with nogil:
        for t in range(nt):
            stream = sb + <uint64_t>t
            nb = 0
            have = 0
            pos = 0
            p1s = 0.0
            p2s = 0.0
            rcs = 0.0
            rss = 0.0
            for j in range(nn):
                if pos + 4 > have:
                    rem = have - pos
                    for k in range(rem):
                        zbuf[k] = zbuf[pos + k]
                    have = rem + _refill(sd, stream, &nb, &zbuf[rem], ZBUF - rem)
                    pos = 0
                z0 = zbuf[pos]
                z1 = zbuf[pos + 1]
                z2 = zbuf[pos + 2]
                z3 = zbuf[pos + 3]
                pos += 4
                i1 = a00 * z0 + a01 * z1 + a02 * z2 + a03 * z3
                q1 = a10 * z0 + a11 * z1 + a12 * z2 + a13 * z3
                i2 = a20 * z0 + a21 * z1 + a22 * z2 + a23 * z3
                q2 = a30 * z0 + a31 * z1 + a32 * z2 + a33 * z3
                p1s += i1 * i1 + q1 * q1
                p2s += i2 * i2 + q2 * q2
                rcs += i1 * i2 + sgn * (q1 * q2)
                rss += i1 * q2 - sgn * (i2 * q1)
            o[t, 0] = p1s / nn
            o[t, 1] = p2s / nn
            o[t, 2] = rcs / nn
            o[t, 3] = rss / nn
    return out
