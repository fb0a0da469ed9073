"""Vertex covers from the frozen nodes of the fractional matcher."""

from fractions import Fraction

from awakesim.fractional import extract_vertex_cover, sampled_fractional
from awakesim.graphs import gen_gnp
from awakesim.oracles import exact_min_vertex_cover, verify_vertex_cover
from awakesim.rng import node_rng

EPS = Fraction(1, 20)


def main():
    print(f"eps = {EPS}, bound factor 2+100*eps = {2 + 100 * EPS}")
    print(f"{'n':>4} {'p':>5} {'cover':>6} {'optimum':>8} {'ratio':>6} {'valid':>6}")
    for k in range(8):
        n = 10 + 2 * k
        p = 0.15 + 0.03 * (k % 4)
        g = gen_gnp(n, p, seed=node_rng(11, n, "gnp", k))
        asg, led, _diag = sampled_fractional(g, EPS, seed=node_rng(11, n, "trial", k))
        cover = extract_vertex_cover(asg)
        ok = verify_vertex_cover(g, cover)
        opt = len(exact_min_vertex_cover(g))
        ratio = len(cover) / opt if opt else float("nan")
        print(f"{n:>4} {p:>5.2f} {len(cover):>6} {opt:>8} {ratio:>6.2f} {str(ok):>6}")
    print()
    print("every frozen node carries load close to 1, so charging its")
    print("incident value pays for the cover; in practice the ratio sits")
    print("far below the guaranteed factor")


if __name__ == "__main__":
    main()
