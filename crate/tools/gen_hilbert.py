#!/usr/bin/env python3
"""Generate Hilbert class polynomials for fundamental discriminants.

Computes j at the CM points of all reduced forms with mpmath and rounds the
expanded product. Output: one line per discriminant,
    disc degree c_deg ... c_1 c_0
preceded by a "# sha256: <hex>" line covering the remaining lines.
"""
import hashlib
import math
import sys

import mpmath


def is_squarefree(m):
    f = 2
    while f * f <= m:
        if m % (f * f) == 0:
            return False
        f += 1
    return True


def is_fundamental(disc):
    # disc is |D| with D = -disc
    if disc % 4 == 3:
        return is_squarefree(disc)
    if disc % 4 == 0:
        m = disc // 4
        return m % 4 in (1, 2) and is_squarefree(m)
    return False


def reduced_forms(disc):
    forms = []
    a = 1
    while 3 * a * a <= disc:
        for b in range(-a + 1, a + 1):
            if (b * b + disc) % (4 * a):
                continue
            c = (b * b + disc) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


def hilbert_poly(disc):
    forms = reduced_forms(disc)
    sq = math.sqrt(disc)
    digits = sum(math.pi * sq / a / math.log(10) for a, _, _ in forms)
    mpmath.mp.dps = int(digits) + 40
    s = mpmath.sqrt(disc)
    roots = []
    for a, b, _ in forms:
        tau = mpmath.mpc(-b, s) / (2 * a)
        roots.append(1728 * mpmath.kleinj(tau))
    coeffs = [mpmath.mpc(1)]
    for r in roots:
        nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c
            nxt[i + 1] -= c * r
        coeffs = nxt
    out = []
    for c in coeffs:
        re = mpmath.nint(c.real)
        if abs(c.real - re) > mpmath.mpf(10) ** -10 or abs(c.imag) > mpmath.mpf(10) ** -10:
            raise RuntimeError("rounding failed for %d" % disc)
        out.append(int(re))
    return out


def main():
    limit = int(sys.argv[1]) if len(sys.argv) > 1 else 10000
    max_h = int(sys.argv[2]) if len(sys.argv) > 2 else 16
    lines = []
    for disc in range(7, limit + 1):
        if not is_fundamental(disc):
            continue
        if len(reduced_forms(disc)) > max_h:
            continue
        coeffs = hilbert_poly(disc)
        lines.append(" ".join([str(disc), str(len(coeffs) - 1)] + [str(c) for c in coeffs]))
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    sys.stdout.write("# sha256: %s\n" % digest)
    sys.stdout.write(body)


if __name__ == "__main__":
    main()
