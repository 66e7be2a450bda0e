import numpy as np
from scipy.linalg import eigh
from scipy.integrate import quad
from math import factorial, exp, log, sqrt

def build(N, m):
    pi = np.array([m**n/factorial(n) for n in range(N+1)]); pi /= pi.sum()
    Q = np.zeros((N+1, N+1))
    for n in range(N+1):
        if n < N: Q[n, n+1] = m
        if n > 0: Q[n, n-1] = n
        Q[n, n] = -(m*(n < N) + n)
    return pi, Q

N, m = 12, 1.0
pi, Q = build(N, m)
d = np.sqrt(pi); S = (Q*d[:,None])/d[None,:]; S = 0.5*(S+S.T)
lam, V = eigh(S)
print("spectral gap:", sorted(-lam)[1])

def flow(rho0, t):
    E = (V*np.exp(t*lam)) @ V.T
    return ((E/d[:,None])*d[None,:]) @ rho0

def fisher(r):
    s, tt = r[:-1], r[1:]
    mask = (s>0)&(tt>0)
    if np.any((s<=0)^(tt<=0) & ((s>0)|(tt>0))): return np.inf
    return float(np.sum((tt[mask]-s[mask])*(np.log(tt[mask])-np.log(s[mask]))*pi[:-1][mask]*m))

def H_of(r):
    mask = r > 0
    return float(np.sum(r[mask]*np.log(r[mask])*pi[mask]))

def route(rho0, tmax=40.0):
    f = lambda t: sqrt(max(fisher(flow(rho0, t)), 0.0))
    # t = e^{-y} substitution near 0 handles the |log t|^(1/2)-type growth
    v1, _ = quad(lambda y: f(exp(-y))*exp(-y), 0, 60, limit=800)
    v2, _ = quad(f, 1.0, tmax, limit=800)
    return v1 + v2

# de Bruijn consistency: H(mu)-H(P*_T mu) vs int_0^T I dt
rng = np.random.default_rng(11)
g = rng.uniform(-2, 2, N+1); rho = np.exp(g); rho /= np.sum(rho*pi)
T = 2.0
lhs = H_of(rho) - H_of(flow(rho, T))
rhs, _ = quad(lambda t: fisher(flow(rho, t)), 0, T, limit=400)
print(f"deBruijn: lhs={lhs:.12f} rhs={rhs:.12f} diff={abs(lhs-rhs):.2e}")
print(f"MLSI at samples: I={fisher(rho):.6f} H={H_of(rho):.6f} ratio={fisher(rho)/H_of(rho):.3f}")

rho_d = np.zeros(N+1); rho_d[0] = 1/pi[0]
print(f"delta route: sqrtH={sqrt(H_of(rho_d)):.10f} intSqrtI={route(rho_d):.10f}")
worst = 0.0
for a in (0.5, 2.0):
    for tr in range(5):
        g = rng.uniform(-a, a, N+1); r0 = np.exp(g); r0 /= np.sum(r0*pi)
        rt = route(r0); h = sqrt(H_of(r0))
        worst = max(worst, rt/h)
        print(f"a={a} tr{tr}: sqrtH={h:.6f} route={rt:.6f} ratio={rt/h:.4f}")
print("worst ratio:", worst)
