# cython: boundscheck=False, wraparound=False, cdivision=True
"""Dense row reduction over a prime field, the hot kernel of the engine.

Operates in place on a flat row-major int64 buffer.  Entries must be
canonical residues 0..p-1 with p < 2**31 so products fit in int64.
"""


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a != 0 mod p
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_inplace(long long[::1] buf, Py_ssize_t nrows, Py_ssize_t ncols, long long p):
    """Reduce to canonical RREF; returns the list of pivot columns."""
    cdef Py_ssize_t r = 0, c, i, j, piv, ra, rb
    cdef long long inv, factor, v
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if buf[i * ncols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            ra = r * ncols
            rb = piv * ncols
            for j in range(ncols):
                v = buf[ra + j]
                buf[ra + j] = buf[rb + j]
                buf[rb + j] = v
        ra = r * ncols
        inv = _inv_mod(buf[ra + c], p)
        if inv != 1:
            for j in range(c, ncols):
                buf[ra + j] = (buf[ra + j] * inv) % p
        for i in range(nrows):
            if i == r:
                continue
            factor = buf[i * ncols + c]
            if factor != 0:
                rb = i * ncols
                for j in range(c, ncols):
                    buf[rb + j] = (buf[rb + j] - factor * buf[ra + j]) % p
                    if buf[rb + j] < 0:
                        buf[rb + j] += p
        pivots.append(c)
        r += 1
    return pivots
