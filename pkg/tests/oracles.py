"""Slow reference implementations used only by the tests.

They share no code with the package: plain Python lists, field arithmetic
by table or modular integers, textbook Gaussian elimination.
"""


def _gf4_mul(a, b):
    # a + b*w with w^2 = w + 1, encoded a + 2b
    a0, a1, b0, b1 = a & 1, a >> 1, b & 1, b >> 1
    c0 = (a0 & b0) ^ (a1 & b1)
    c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1)
    return c0 | (c1 << 1)


def _gf4_inv(a):
    for b in range(1, 4):
        if _gf4_mul(a, b) == 1:
            return b
    raise ZeroDivisionError


def ops(q):
    if q == 4:
        return (lambda a, b: a ^ b, lambda a, b: a ^ b, _gf4_mul, _gf4_inv)
    return (lambda a, b: (a + b) % q, lambda a, b: (a - b) % q,
            lambda a, b: (a * b) % q, lambda a: pow(a, q - 2, q))


def rank(rows, q):
    add, sub, mul, inv = ops(q)
    m = [list(map(int, r)) for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        iv = inv(m[r][c])
        m[r] = [mul(iv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [sub(x, mul(f, y)) for x, y in zip(m[i], m[r])]
        r += 1
    return r


def matmul(a, b, q):
    add, sub, mul, inv = ops(q)
    out = []
    for row in a:
        new = []
        for j in range(len(b[0]) if b else 0):
            acc = 0
            for k, x in enumerate(row):
                acc = add(acc, mul(int(x), int(b[k][j])))
            new.append(acc)
        out.append(new)
    return out
