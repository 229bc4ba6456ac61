"""Draws the default sum-exp instance and solves it with an independent optimizer.

The coefficients printed here are stored in data/sum_exp_default.txt and the
minimizer is frozen into the objectives unit test.
"""
import numpy as np
from mpmath import mp, mpf, exp, matrix, log
from scipy.optimize import minimize

SEED = 20171030
n, k = 3, 3
rng = np.random.default_rng(SEED)
c = np.round(rng.normal(size=(k, n)), 6)


def f(x):
    return float(np.sum(np.exp(c @ x)))


def g(x):
    return c.T @ np.exp(c @ x)


res = minimize(f, np.full(n, 1.0 / n), jac=g, method="SLSQP",
               bounds=[(0, 1)] * n,
               constraints=[{"type": "eq", "fun": lambda x: np.sum(x) - 1}],
               options={"ftol": 1e-16, "maxiter": 1000})
x = res.x

# Newton polish in extended precision on the tangent space of the simplex.
mp.dps = 50
C = [[mpf(repr(float(v))) for v in row] for row in c]
X = [mpf(repr(float(v))) for v in x]
for _ in range(30):
    w = [exp(sum(C[i][j] * X[j] for j in range(n))) for i in range(k)]
    grad = [sum(w[i] * C[i][j] for i in range(k)) for j in range(n)]
    hess = [[sum(w[i] * C[i][a] * C[i][b] for i in range(k)) for b in range(n)] for a in range(n)]
    # KKT system: H dx + lambda 1 = -grad, sum dx = 0
    A = matrix(n + 1, n + 1)
    rhs = matrix(n + 1, 1)
    for a in range(n):
        for b in range(n):
            A[a, b] = hess[a][b]
        A[a, n] = 1
        A[n, a] = 1
        rhs[a] = -grad[a]
    sol = mp.lu_solve(A, rhs)
    X = [X[j] + sol[j] for j in range(n)]
fstar = sum(exp(sum(C[i][j] * X[j] for j in range(n))) for i in range(k))
w = [exp(sum(C[i][j] * X[j] for j in range(n))) for i in range(k)]
grad = [sum(w[i] * C[i][j] for i in range(k)) for j in range(n)]
print("c =")
for row in c:
    print(" ".join(f"{v:.6f}" for v in row))
print("x* =", [mp.nstr(v, 17) for v in X])
print("f* =", mp.nstr(fstar, 17))
print("grad spread =", mp.nstr(max(grad) - min(grad), 5))
print("f(barycenter) =", f(np.full(n, 1.0 / n)))
z = [log(v) for v in X]
m = sum(z) / n
print("z* =", [mp.nstr(v - m, 17) for v in z])
