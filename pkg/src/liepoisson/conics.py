"""Exact solution of conics over Q(i).

The tail normalizations in the classifier repeatedly need rational points
on conics a x^2 + b y^2 = v with a, b, v in Q(i), equivalently isotropic
vectors of ternary forms.  These are found by Lagrange reduction carried
out in the Euclidean ring Z[i]:

* the three coefficients are kept square-free, with shared prime factors
  moved onto the third coefficient (a x^2 + b y^2 + c z^2 with g dividing
  a and b forces g | z, leaving (a/g, b/g, c g));
* the coefficient of largest norm, say c, is shrunk using a balanced
  square root t of -ab modulo c through the identity
  (t^2 + ab)(a X^2 + b Y^2) = a (t X + b Y)^2 + b (t Y - a X)^2,
  which turns a point on (a, b, (t^2 + ab)/c) into one on (a, b, c);
* sign choices of the square root per prime factor are enumerated and the
  one giving the smallest replacement is kept, which breaks the plateaus
  the reduction hits when all norms are comparable;
* small instances finish by a bounded search.

Square roots modulo a Gaussian prime live in GF(p) for split primes and in
GF(q^2) for inert ones; both use Tonelli-Shanks.  A failed modular square
root certifies that the conic has no Q(i)-rational point, which callers
report as a genuine obstruction.
"""

from __future__ import annotations

from typing import Optional, Tuple

from .scalars import (
    GaussianRational,
    I,
    ONE,
    ZERO,
    _gi_divmod,
    gaussian_factor,
    gr,
    sqrt_gaussian,
    square_free_part_zi,
)

Point = Tuple[GaussianRational, GaussianRational]
Triple = Tuple[GaussianRational, GaussianRational, GaussianRational]


# ---------------------------------------------------------------------------
# Modular arithmetic in Z[i]
# ---------------------------------------------------------------------------

def _gi_mod(a: GaussianRational, m: GaussianRational) -> GaussianRational:
    return _gi_divmod(a, m)[1]


def _gi_gcd(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    while b:
        a, b = b, _gi_mod(a, b)
    return a


def _gi_ext_gcd(a: GaussianRational, b: GaussianRational):
    """(g, u, v) with u*a + v*b = g in Z[i]."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        q, r = _gi_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def _tonelli_shanks(a: int, p: int) -> Optional[int]:
    """Square root of a modulo an odd prime p, or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


def _gf2_mul(x, y, q):
    return ((x[0] * y[0] - x[1] * y[1]) % q, (x[0] * y[1] + x[1] * y[0]) % q)


def _gf2_pow(x, e, q):
    out = (1, 0)
    while e:
        if e & 1:
            out = _gf2_mul(out, x, q)
        x = _gf2_mul(x, x, q)
        e >>= 1
    return out


def _sqrt_gf_q2(a, q: int):
    """Square root in GF(q^2) = GF(q)[i], for an inert rational prime q."""
    a = (a[0] % q, a[1] % q)
    if a == (0, 0):
        return (0, 0)
    order = q * q - 1
    if _gf2_pow(a, order // 2, q) != (1, 0):
        return None
    s, m = order, 0
    while s % 2 == 0:
        s //= 2
        m += 1
    z = None
    for zr in range(q):
        for zi in range(q):
            if (zr, zi) == (0, 0):
                continue
            if _gf2_pow((zr, zi), order // 2, q) != (1, 0):
                z = (zr, zi)
                break
        if z:
            break
    c = _gf2_pow(z, s, q)
    t = _gf2_pow(a, s, q)
    r = _gf2_pow(a, (s + 1) // 2, q)
    while t != (1, 0):
        i = 0
        t2 = t
        while t2 != (1, 0):
            t2 = _gf2_mul(t2, t2, q)
            i += 1
        b = _gf2_pow(c, 1 << (m - i - 1), q)
        m, c = i, _gf2_mul(b, b, q)
        t = _gf2_mul(t, c, q)
        r = _gf2_mul(r, b, q)
    return r


def _sqrt_mod_prime(a: GaussianRational, pi: GaussianRational) -> Optional[GaussianRational]:
    """Square root of a modulo a Gaussian prime pi (pi does not divide a)."""
    p = int(pi.norm())
    if p == 2:
        return _gi_mod(a, pi)
    if pi.im == 0 or pi.re == 0:
        q = int(abs(pi.re if pi.im == 0 else pi.im))
        root = _sqrt_gf_q2((int(a.re) % q, int(a.im) % q), q)
        if root is None:
            return None
        return gr(root[0], root[1])
    r = (-int(pi.re) * pow(int(pi.im), -1, p)) % p
    a_int = (int(a.re) + int(a.im) * r) % p
    root = _tonelli_shanks(a_int, p)
    if root is None:
        return None
    return gr(root)


def _sqrt_mod_squarefree(a: GaussianRational, m: GaussianRational) -> Optional[GaussianRational]:
    """One balanced t with t^2 = a mod m, for square-free m coprime to a."""
    roots = _sqrt_mod_squarefree_all(a, m, limit=1)
    return roots[0] if roots else None


def _sqrt_mod_squarefree_all(a: GaussianRational, m: GaussianRational, limit: int = 16):
    """Balanced square roots of a modulo square-free m (CRT sign choices)."""
    candidates = [ZERO]
    mod = ONE
    for pi, exp in gaussian_factor(m):
        if exp != 1:
            raise ValueError("modulus must be square-free")
        root = _sqrt_mod_prime(_gi_mod(a, pi), pi)
        if root is None:
            return []
        g, u, _ = _gi_ext_gcd(mod, pi)
        u = u / g
        new = []
        for t in candidates:
            for r in (root, -root) if root else (root,):
                new.append(_gi_mod(t + (r - t) * u * mod, mod * pi))
            if len(new) >= limit:
                break
        mod = mod * pi
        candidates = new[:limit]
    return candidates


# ---------------------------------------------------------------------------
# Lagrange reduction for ternary forms
# ---------------------------------------------------------------------------

def _small_ternary_search(coeffs, bounds=(3, 8)) -> Optional[Triple]:
    """Bounded search for a x^2 + b y^2 + c z^2 = 0 over small Gaussian x, y."""
    a, b, c = coeffs
    for bound in bounds:
        box = range(-bound, bound + 1)
        for xr in box:
            for xi in box:
                x = gr(xr, xi)
                ax2 = a * x * x
                for yr in box:
                    for yi in box:
                        if xr == xi == yr == yi == 0:
                            continue
                        y = gr(yr, yi)
                        w = -(ax2 + b * y * y) / c
                        z = sqrt_gaussian(w)
                        if z is not None:
                            return x, y, z
    return None


def isotropic_ternary(a: GaussianRational, b: GaussianRational, c: GaussianRational) -> Optional[Triple]:
    """Nontrivial (x, y, z) with a x^2 + b y^2 + c z^2 = 0 over Q(i).

    Lagrange reduction: coefficients are kept square-free and pairwise
    coprime, and the largest is repeatedly shrunk using a balanced square
    root of the product of the other two.  Returns None when the form is
    anisotropic (certified by a failed modular square root).
    """
    coeffs = [a, b, c]
    for idx in range(3):
        if not coeffs[idx]:
            sol = [ZERO, ZERO, ZERO]
            sol[idx] = ONE
            return tuple(sol)
    stack = []
    stall = 0
    for _round in range(400):
        # square-free reduction of each coefficient
        for idx in range(3):
            rep, s = square_free_part_zi(coeffs[idx])
            if not s.is_one():
                stack.append(("scale", idx, s))
                coeffs[idx] = rep
        # common factor of all three
        g = _gi_gcd(_gi_gcd(coeffs[0], coeffs[1]), coeffs[2])
        if int(g.norm()) > 1:
            coeffs = [x / g for x in coeffs]
            continue
        # pairwise shared factors move onto the third coefficient
        shared = None
        for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            g = _gi_gcd(coeffs[i], coeffs[j])
            if int(g.norm()) > 1:
                shared = (i, j, k, g)
                break
        if shared is not None:
            i, j, k, g = shared
            coeffs[i] = coeffs[i] / g
            coeffs[j] = coeffs[j] / g
            coeffs[k] = coeffs[k] * g
            stack.append(("mult", k, g))
            continue
        order = sorted(range(3), key=lambda idx: int(coeffs[idx].norm()))
        big = order[2]
        if int(coeffs[big].norm()) <= 128:
            sol = _small_ternary_search(coeffs)
            if sol is None:
                return None
            return _unwind(stack, sol)
        i, j = order[0], order[1]
        a_, b_, c_ = coeffs[i], coeffs[j], coeffs[big]
        roots = _sqrt_mod_squarefree_all(_gi_mod(-(a_ * b_), c_), c_)
        if not roots:
            return None
        best = None
        for t in roots:
            e = (t * t + a_ * b_) / c_
            if not e:
                sol = [ZERO, ZERO, ZERO]
                sol[i], sol[j] = t, a_
                return _unwind(stack, tuple(sol))
            e0, s = square_free_part_zi(e)
            if best is None or int(e0.norm()) < int(best[1].norm()):
                best = (t, e0, s)
        t, e0, s = best
        if int(e0.norm()) >= int(c_.norm()):
            stall += 1
            if stall > 6:
                sol = _small_ternary_search(coeffs, bounds=(12,))
                if sol is not None:
                    return _unwind(stack, sol)
                return None
        else:
            stall = 0
        stack.append(("lagrange", i, j, big, t, a_, b_, e0 * s))
        coeffs[big] = e0
    return None


def _unwind(stack, sol: Triple) -> Optional[Triple]:
    x = list(sol)
    for entry in reversed(stack):
        kind = entry[0]
        if kind == "scale":
            _, idx, s = entry
            x[idx] = x[idx] / s
        elif kind == "mult":
            _, idx, g = entry
            x[idx] = x[idx] * g
        else:
            _, i, j, k, t, a_, b_, zfac = entry
            xi, xj, xk = x[i], x[j], x[k]
            x[i] = t * xi + b_ * xj
            x[j] = t * xj - a_ * xi
            x[k] = zfac * xk
    if all(not v for v in x):
        return None
    return tuple(x)


def isotropic_binary(a: GaussianRational, b: GaussianRational) -> Optional[Point]:
    """(x, y) != 0 with a x^2 + b y^2 = 0, or None (needs -b/a square)."""
    s = sqrt_gaussian(-b / a)
    if s is None:
        return None
    return s, ONE


def represent_binary(
    a: GaussianRational, b: GaussianRational, v: GaussianRational
) -> Optional[Point]:
    """A point (x, y) with a x^2 + b y^2 = v over Q(i), preferring x != 0.

    Returns None when the conic has no Q(i)-rational point.
    """
    if not v:
        raise ValueError("v must be nonzero")
    if not a and not b:
        return None
    if not a:
        y = sqrt_gaussian(v / b)
        return None if y is None else (ZERO, y)
    if not b:
        x = sqrt_gaussian(v / a)
        return None if x is None else (x, ZERO)
    iso = isotropic_binary(a, b)
    if iso is not None:
        pt = _isotropic_shift(a, b, iso[0], iso[1], v)
        if pt is not None:
            return pt
    sol = isotropic_ternary(a, b, -v)
    if sol is None:
        return None
    x0, y0, z0 = sol
    if not z0:
        return None
    x, y = x0 / z0, y0 / z0
    if a * x * x + b * y * y != v:
        return None
    return _ensure_x_nonzero(a, b, v, x, y)


def _isotropic_shift(a, b, x0, y0, v) -> Optional[Point]:
    """Point with value v on an isotropic binary form ((x0, y0) isotropic)."""
    if not x0 or not y0:
        return None
    # with x = x0(t + s), y = y0(t - s): a x^2 + b y^2 = 4 a x0^2 t s
    for t in (ONE, gr(2), gr(3)):
        s = v / (gr(4) * a * x0 * x0 * t)
        x = x0 * (t + s)
        y = y0 * (t - s)
        if x and a * x * x + b * y * y == v:
            return x, y
    return None


def _ensure_x_nonzero(a, b, v, x, y) -> Point:
    if x:
        return x, y
    for u in (ZERO, ONE, -ONE, I, -I):
        denom = a + b * u * u
        if not denom:
            continue
        t = gr(-2) * (b * y * u) / denom
        if not t:
            continue
        nx, ny = t, y + t * u
        if nx and a * nx * nx + b * ny * ny == v:
            return nx, ny
    return x, y
