"""The catalog pair "s0-pair" on m discrete points.

Its splitting has B' = 0 and one class each in C' and E', all in degree 0.

Generators with a nonempty simplex live in degree 0 and square to
themselves; the degree-1 classes with empty simplex multiply to zero with
everything.  The script tabulates this for m = 2..4.
"""

from polyprod import builtin, discrete, full_generators, star

if __name__ == "__main__":
    for m in (2, 3, 4):
        K = discrete(m)
        p = builtin("s0-pair", m)
        gens = [g for g in full_generators(K, p) if g.J]
        alphas = [g for g in gens if g.sigma]
        betas = [g for g in gens if not g.sigma]
        idem = sum(star(a, a, K, p).terms == {a: 1} for a in alphas)
        zero = sum(star(a, b, K, p).is_zero() for a in gens for b in betas)
        print(f"m={m}: {len(alphas)} degree-0 classes, {idem} idempotent; "
              f"{len(betas)} degree-1 classes, {zero}/{len(gens) * len(betas)} products with them vanish")
