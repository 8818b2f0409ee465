"""Pure-Python fallback for the F_p row-reduction kernel.

Same contract as the compiled ``_fpkernel`` module: in-place RREF on a
flat row-major buffer of canonical residues.
"""


def rref_inplace(buf, nrows, ncols, p):
    """Reduce to canonical RREF; returns the list of pivot columns."""
    pivots = []
    r = 0
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
            ra, rb = r * ncols, piv * ncols
            for j in range(ncols):
                buf[ra + j], buf[rb + j] = buf[rb + j], buf[ra + j]
        ra = r * ncols
        inv = pow(buf[ra + c], -1, p)
        if inv != 1:
            for j in range(c, ncols):
                buf[ra + j] = (buf[ra + j] * inv) % p
        for i in range(nrows):
            if i == r:
                continue
            factor = buf[i * ncols + c]
            if factor:
                rb = i * ncols
                for j in range(c, ncols):
                    buf[rb + j] = (buf[rb + j] - factor * buf[ra + j]) % p
        pivots.append(c)
        r += 1
    return pivots
