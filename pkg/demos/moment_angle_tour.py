"""Moment-angle complexes of a few small simplicial complexes.

Prints the Betti numbers computed by the Cartan engine next to the ones read
off full subcomplexes directly, then multiplies the two degree-3 classes of
the 4-cycle to recover the top class of S^3 x S^3.
"""

from polyprod import builtin, cycle, discrete, full_generators, full_series, hochster_direct, simplex_boundary, star


def show(name, K):
    p = builtin("moment-angle", K.m)
    series = full_series(K, p)
    print(f"{name:<22} engine {dict(series.coeffs)}")
    print(f"{'':<22} direct {hochster_direct(K)}")


if __name__ == "__main__":
    show("two points", discrete(2))
    show("4-cycle", cycle(4))
    show("5-cycle", cycle(5))
    show("boundary of 3-simplex", simplex_boundary(4))

    K = cycle(4)
    p = builtin("moment-angle", 4)
    gens = full_generators(K, p)
    x, y = [g for g in gens if g.degree == 3]
    print()
    print("x =", x.label)
    print("y =", y.label)
    for a, b, name in ((x, y, "x*y"), (y, x, "y*x"), (x, x, "x*x")):
        res = star(a, b, K, p)
        terms = ", ".join(f"{c} [{g.label}]" for g, c in res.items()) or "0"
        print(f"{name} = {terms}")
