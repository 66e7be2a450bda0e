import numpy as np
from math import exp, factorial
from scipy.stats import binom, poisson

def mehler(N, m, t):
    p = exp(-t); lam = (1-p)*m
    T = np.zeros((N+1, N+1))
    for n in range(N+1):
        for k in range(N):
            T[n, k] = sum(binom.pmf(j, n, p)*poisson.pmf(k-j, lam) for j in range(min(n, k)+1))
        T[n, N] = max(0.0, 1.0 - T[n, :N].sum())
    return T

N, m = 16, 1.0
rng = np.random.default_rng(5)
for t in (0.25, 1.0):
    T = mehler(N, m, t)
    def resid(F, margin):
        PF = T @ F
        DF = np.zeros(N+1); DF[:N] = F[1:] - F[:-1]
        PDF = T @ DF
        r = np.abs((PF[1:] - PF[:-1]) - exp(-t)*PDF[:N])
        return r[:N-margin+1].max()
    worst = 0
    for _ in range(20):
        F = np.zeros(N+1); F[:N-3] = rng.uniform(-1, 1, N-3)
        worst = max(worst, resid(F, 4))
    print(f"t={t}: mehler BE interior-supported margin4 worst={worst:.3e}  iota margin4={resid(np.arange(N+1,dtype=float),4):.3e}  iota margin8={resid(np.arange(N+1,dtype=float),8):.3e}")
