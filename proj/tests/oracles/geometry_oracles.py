"""Symbolic reference values frozen into the C++ tests.

Run: python3 tests/oracles/geometry_oracles.py
"""
import sympy as sp

x1, x2, xn = sp.symbols("x1 x2 xn", real=True)
X = (x1, x2)


def christoffel(G):
    Gi = G.inv()
    return [[[sp.simplify(sum(Gi[m, r] * (sp.diff(G[i, r], X[j]) + sp.diff(G[j, r], X[i]) - sp.diff(G[i, j], X[r]))
                              for r in range(2)) / 2)
              for j in range(2)] for i in range(2)] for m in range(2)]


def laplace_beltrami(G, f):
    Gi = G.inv()
    gam = christoffel(G)
    return sp.simplify(sum(Gi[i, j] * (sp.diff(f, X[i], X[j]) - sum(gam[m][i][j] * sp.diff(f, X[m]) for m in range(2)))
                           for i in range(2) for j in range(2)))


def def_F(G, c, u, n=3):
    Gi = G.inv()
    gam = christoffel(G)
    du = [sp.diff(u, v) for v in X]
    H = [[sp.diff(u, X[a], X[b]) - sum(gam[m][a][b] * du[m] for m in range(2)) for b in range(2)] for a in range(2)]
    gr = [sum(Gi[a, b] * du[b] for b in range(2)) for a in range(2)]
    cc = c.subs(xn, u)
    c1 = sp.diff(c, x1).subs(xn, u)
    c2 = sp.diff(c, x2).subs(xn, u)
    cn = sp.diff(c, xn).subs(xn, u)
    lap = sum(Gi[a, b] * H[a][b] for a in range(2) for b in range(2))
    ng2 = sum(du[a] * gr[a] for a in range(2))
    adv = gr[0] * c1 + gr[1] * c2
    hgg = sum(H[a][b] * gr[a] * gr[b] for a in range(2) for b in range(2))
    return (-lap + sp.Rational(1 - n, 2) / cc * adv + sp.Rational(n - 1, 2) / cc * cn) * (1 + ng2) + hgg


def mean_curvature(G2, c, u):
    """c²(|∇f|²Δf − ∇²f(∇f,∇f)) for f = xn − u in g = c(ĝ ⊕ 1), straight from the 3D metric."""
    Y = (x1, x2, xn)
    g = sp.zeros(3, 3)
    g[:2, :2] = G2
    g[2, 2] = 1
    g = c * g
    gi = g.inv()
    f = xn - u
    df = [sp.diff(f, v) for v in Y]
    Gam = [[[sum(gi[k, l] * (sp.diff(g[i, l], Y[j]) + sp.diff(g[j, l], Y[i]) - sp.diff(g[i, j], Y[l])) for l in range(3)) / 2
             for j in range(3)] for i in range(3)] for k in range(3)]
    Hf = [[sp.diff(f, Y[i], Y[j]) - sum(Gam[k][i][j] * df[k] for k in range(3)) for j in range(3)] for i in range(3)]
    grad = [sum(gi[i, j] * df[j] for j in range(3)) for i in range(3)]
    nf = sum(df[i] * grad[i] for i in range(3))
    lf = sum(gi[i, j] * Hf[i][j] for i in range(3) for j in range(3))
    hff = sum(Hf[i][j] * grad[i] * grad[j] for i in range(3) for j in range(3))
    return (c ** 2 * (nf * lf - hff)).subs(xn, u)


def show(name, expr, points):
    for p in points:
        v = sp.N(expr.subs({x1: p[0], x2: p[1]}), 20)
        print(f"{name} at {p}: {v}")


if __name__ == "__main__":
    pts = [(sp.Rational(1, 4), sp.Rational(1, 2)), (sp.Rational(1, 2), sp.Rational(3, 4))]
    for label, G in [("exp2x1", sp.exp(2 * x1) * sp.eye(2)), ("diag1_x1sq", sp.diag(1, x1 ** 2 + 1))]:
        gam = christoffel(G)
        for m in range(2):
            for i in range(2):
                for j in range(i, 2):
                    show(f"Gamma[{label}] {m}{i}{j}", gam[m][i][j], pts[:1])
    print("laplace_beltrami(exp2x1, x2) =", laplace_beltrami(sp.exp(2 * x1) * sp.eye(2), x2))
    print("laplace_beltrami(diag1_x1sq, x1) =", laplace_beltrami(sp.diag(1, x1 ** 2 + 1), x1))

    probes = [(sp.Rational(1, 4), sp.Rational(1, 4)), (sp.Rational(1, 2), sp.Rational(1, 2)),
              (sp.Rational(3, 4), sp.Rational(1, 4)), (sp.Rational(1, 4), sp.Rational(3, 4)),
              (sp.Rational(3, 8), sp.Rational(5, 8))]
    u = sp.Rational(1, 100) * sp.sin(sp.pi * x1) * sp.sin(sp.pi * x2)
    show("def_F(I, 1+xn^3, 0.01 sin sin)", def_F(sp.eye(2), 1 + xn ** 3, u), probes)

    u2 = sp.Rational(2, 100) * x1 * x2
    mc = sp.simplify(mean_curvature(sp.eye(2), sp.Integer(1), u2))
    print("mean_curvature(I, 1, 0.02 x1 x2) =", mc)
    show("mean_curvature(I, 1, 0.02 x1 x2)", mc, probes[:2])

    # Independent check that the mean-curvature and def_F forms agree on a
    # non-trivial metric.
    G = sp.diag(1 + x1 ** 2 / 2, 1 + x1 * x2 / 4)
    c = 1 + x1 * x2 / 5 + xn ** 3 * sp.Rational(2, 5) * (1 + x1 * x2) / 6
    u3 = sp.Rational(3, 100) * sp.sin(sp.pi * x1) * x2
    p = probes[4]
    a = sp.N(mean_curvature(G, c, u3).subs({x1: p[0], x2: p[1]}), 30)
    b = sp.N(def_F(G, c, u3).subs({x1: p[0], x2: p[1]}), 30)
    print("mean_curvature - def_F at", p, "=", a - b)

    # Gauge equation Δφ − ĝ(X1, ∇φ) + ½|∇φ|² for ĝ = diag(1 + x1²/2, 1 + x1 x2/4).
    phi = sp.sin(x1) * sp.cos(2 * x2) / 5 + x1 * x2 / 10
    X1 = (3 * x2 / 10, -x1 / 5)
    Gi = G.inv()
    dphi = [sp.diff(phi, v) for v in X]
    gauge = laplace_beltrami(G, phi) - (X1[0] * dphi[0] + X1[1] * dphi[1]) + sum(
        Gi[i, j] * dphi[i] * dphi[j] for i in range(2) for j in range(2)) / 2
    show("gauge_pde(diag_poly ghat, phi, X1)", gauge, probes[:3])

    # Adjoint potential q = ((1−n)/2) Δ_ĝ log c(·,0) for conformal_exp.
    Ge = sp.exp(sp.Rational(2, 5) * x1 - sp.Rational(1, 5) * x2) * sp.eye(2)
    c0 = sp.exp(sp.Rational(3, 10) * x1 - sp.Rational(1, 5) * x2)
    q = -laplace_beltrami(Ge, sp.log(c0))
    print("adjoint q(conformal_exp) =", sp.simplify(q))
    Gd = sp.diag(1 + x1 ** 2 / 2, 1 + x1 * x2 / 4)
    qd = -laplace_beltrami(Gd, sp.log(1 + x1 * x2 / 5))
    show("adjoint q(diag_poly)", qd, probes[:2])
