"""Independent symbolic oracle for the frozen values in the unit tests.

Recomputes extrinsic geometry of the builtin parametrizations with sympy
(exact differentiation, no grids) and prints the values the C++ tests pin.
Run: python3 tests/oracle/closed_forms.py
"""
import json
import sympy as sp

u, v = sp.symbols("u v", real=True)


def geometry(X, sphere_radius=None):
    X = sp.Matrix(X)
    Xu, Xv = X.diff(u), X.diff(v)
    g = sp.Matrix([[Xu.dot(Xu), Xu.dot(Xv)], [Xv.dot(Xu), Xv.dot(Xv)]])
    gi = g.inv()

    def normal(w):
        c = sp.Matrix([w.dot(Xu), w.dot(Xv)])
        up = gi * c
        r = w - up[0] * Xu - up[1] * Xv
        if sphere_radius is not None:
            r = r - (w.dot(X) / sphere_radius**2) * X
        return r

    B = [[normal(X.diff(a).diff(b)) for b in (u, v)] for a in (u, v)]
    H = (gi[0, 0] * B[0][0] + 2 * gi[0, 1] * B[0][1] + gi[1, 1] * B[1][1]) / 2
    h2 = H.dot(H)
    A = sp.Matrix(2, 2, lambda i, j: B[i][j].dot(H))
    c = 0 if sphere_radius is None else 1 / sphere_radius**2
    K = c + (B[0][0].dot(B[1][1]) - B[0][1].dot(B[0][1])) / g.det()
    # Christoffel symbols of the second kind from the metric
    q = (u, v)
    Gam = [[[sum(gi[k, l] * (g[l, i].diff(q[j]) + g[l, j].diff(q[i]) - g[i, j].diff(q[l])) / 2
                 for l in range(2)) for j in range(2)] for i in range(2)] for k in range(2)]
    S = -2 * h2 * g + 4 * A

    def nabla(Tm, k, i, j):
        return Tm[i, j].diff(q[k]) - sum(Gam[l][k][i] * Tm[l, j] + Gam[l][k][j] * Tm[i, l] for l in range(2))

    div_s2 = [sum(gi[i, k] * nabla(S, k, i, j) for i in range(2) for k in range(2)) for j in range(2)]
    grad_h2 = [h2.diff(u), h2.diff(v)]
    dH = [normal(H.diff(a)) for a in (u, v)]
    return dict(g=g, H=H, h2=h2, A=A, K=K, div_s2=div_s2, grad_h2=grad_h2, dH=dH, gi=gi)


def eig(A, g):
    M = g.inv() * A
    tr, det = M.trace(), M.det()
    disc = sp.sqrt(tr**2 / 4 - det)
    return tr / 2 + disc, tr / 2 - disc


def num(e, at):
    return float(sp.N(sp.sympify(e).subs(at), 30))


out = {}

# helix x line in R^4
def helix(k, tau):
    q = k**2 + tau**2
    rad, pitch, rate = k / q, tau / q, sp.sqrt(q)
    return [rad * sp.cos(rate * u), rad * sp.sin(rate * u), pitch * rate * u, v]

for k, tau in [(1, sp.Rational(1, 2)), (2, sp.Rational(3, 10))]:
    G = geometry(helix(k, tau))
    at = {u: sp.Rational(13, 10), v: sp.Rational(1, 5)}
    l1, l2 = eig(G["A"], G["g"])
    out[f"helix_k{k}_tau{float(tau)}"] = {
        "g": [num(G["g"][0, 0], at), num(G["g"][0, 1], at), num(G["g"][1, 1], at)],
        "h": num(sp.sqrt(G["h2"]), at),
        "lambda": [num(l1, at), num(l2, at)],
        "K": num(G["K"], at),
        "normal_connection_u": num(sp.sqrt(G["dH"][0].dot(G["dH"][0])), at),
        "normal_connection_v": num(sp.sqrt(G["dH"][1].dot(G["dH"][1])), at),
        "div_s2": [num(x, at) for x in G["div_s2"]],
    }

# graphs over the unit square centred at 0
for name, z in [("u2_minus_v3", u**2 - v**3), ("paraboloid", u**2 + v**2)]:
    G = geometry([u, v, z])
    at = {u: sp.Rational(1, 5), v: sp.Rational(-3, 10)}
    l1, l2 = eig(G["A"], G["g"])
    out["graph_" + name] = {
        "at": [0.2, -0.3],
        "h2": num(G["h2"], at),
        "K": num(G["K"], at),
        "lambda": [num(l1, at), num(l2, at)],
        "div_s2": [num(x, at) for x in G["div_s2"]],
        "grad_h2": [num(x, at) for x in G["grad_h2"]],
    }

# warped cylinder r = 1, warp 1/10
eps = sp.Rational(1, 10)
th = u + eps * sp.sin(u) * sp.cosh(v)
zz = v + eps * sp.cos(u) * sp.sinh(v)
G = geometry([sp.cos(th), sp.sin(th), zz])
at = {u: sp.Rational(7, 10), v: sp.Rational(2, 5)}
out["cylinder_warp0.1"] = {
    "g": [num(G["g"][0, 0], at), num(G["g"][0, 1], at), num(G["g"][1, 1], at)],
    "h": num(sp.sqrt(G["h2"]), at),
    "K": num(G["K"], at),
}

# spherical chart, r = 2
r = 2
G = geometry([r * sp.sin(v) * sp.cos(u), r * sp.sin(v) * sp.sin(u), r * sp.cos(v)])
at = {u: sp.Rational(1, 2), v: 1}
out["sphere_r2"] = {
    "at": [0.5, 1.0],
    "g": [num(G["g"][0, 0], at), num(G["g"][0, 1], at), num(G["g"][1, 1], at)],
    "h": num(sp.sqrt(G["h2"]), at),
    "K": num(G["K"], at),
}

# product torus r1 = 1, r2 = 2 in R^4 and in S^3(sqrt 5)
r1, r2 = 1, 2
X = [r1 * sp.cos(u / r1), r1 * sp.sin(u / r1), r2 * sp.cos(v / r2), r2 * sp.sin(v / r2)]
at = {u: sp.Rational(3, 10), v: sp.Rational(11, 10)}
for tag, R in [("euclidean", None), ("sphere", sp.sqrt(r1**2 + r2**2))]:
    G = geometry(X, R)
    l1, l2 = eig(G["A"], G["g"])
    out["product_torus_1_2_" + tag] = {
        "h": num(sp.sqrt(G["h2"]), at),
        "lambda": [num(l1, at), num(l2, at)],
        "K": num(G["K"], at),
    }

# Mercator chart of the sphere, r = 3: K = -e^{-2 rho} (rho_xx + rho_yy)
rho = sp.log(3) - sp.log(sp.cosh(v))
out["mercator_r3_K"] = num(-sp.exp(-2 * rho) * (rho.diff(u, 2) + rho.diff(v, 2)), {v: sp.Rational(1, 2)})

print(json.dumps(out, indent=1))
