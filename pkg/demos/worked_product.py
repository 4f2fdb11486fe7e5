"""A product on two ghost-free points with the pair (M_f, CP^3).

Lists the generators in the smash summand over J = {1, 2}, then multiplies
a class carrying b4 at vertex 2 by one carrying e2 there.  The E and B
factors combine through the A-side table (e2 * b4 = b6) and vertex 2 leaves
the Cartan subset.
"""

from polyprod import builtin, discrete, parse_label, smash_generators, star

if __name__ == "__main__":
    K = discrete(2)
    p = builtin("mf-cp3", 2)
    gens = smash_generators(K, p, J=[1, 2])
    print(f"{len(gens)} generators in the summand over J = {{1,2}}")
    for g in gens[:8]:
        print(f"  degree {g.degree:>3}  {g.label}")
    print("  ...")

    u = parse_label("J=1,2;I=1;S=1;L=-1:0;F=1:c8,2:b4", K, p)
    v = parse_label("J=1,2;I=1,2;S=1;L=-1:0;F=1:c8,2:e2", K, p)
    res = star(u, v, K, p)
    print()
    print(f"u (degree {u.degree}) = {u.label}")
    print(f"v (degree {v.degree}) = {v.label}")
    for g, c in res.items():
        print(f"u * v = {c} [{g.label}]  degree {g.degree}")
