import numpy as np
from scipy.linalg import expm, eigh
from math import factorial, exp, log, sqrt

def build(N, m):
    pi = np.array([m**n/factorial(n) for n in range(N+1)]); pi /= pi.sum()
    Q = np.zeros((N+1, N+1))
    for n in range(N+1):
        if n < N: Q[n, n+1] = m
        if n > 0: Q[n, n-1] = n
        Q[n, n] = -(m*(n < N) + n)
    return pi, Q

def expm_sym(Q, pi, t):
    # symmetrized eigendecomposition route (what the C++ will do)
    d = np.sqrt(pi)
    S = (Q * d[:, None]) / d[None, :]
    S = 0.5*(S + S.T)
    lam, V = eigh(S)
    E = (V * np.exp(t*lam)) @ V.T
    return (E / d[:, None]) * d[None, :]

def mehler(N, m, t):
    from scipy.stats import binom, poisson
    p = exp(-t); lam = (1-p)*m
    T = np.zeros((N+1, N+1))
    for n in range(N+1):
        row = np.zeros(N+1)
        for k in range(N):
            row[k] = sum(binom.pmf(j, n, p)*poisson.pmf(k-j, lam) for j in range(0, min(n, k)+1))
        row[N] = max(0.0, 1.0 - row[:N].sum())
        T[n] = row
    return T

N, m = 16, 1.0
pi, Q = build(N, m)
tail = 1 - exp(-m)*sum(m**n/factorial(n) for n in range(N+1))/ (sum(m**n/factorial(n) for n in range(N+1))/sum(m**n/factorial(n) for n in range(N+1)))
tail = 1 - exp(-m)*sum(m**n/factorial(n) for n in range(N+1))
print("per-site tail mass (N=16,m=1):", tail)

for t in (0.1, 1.0, 5.0):
    Te = expm_sym(Q, pi, t)
    Ts = expm(t*Q)
    Tm = mehler(N, m, t)
    print(f"t={t}: |sym-scipy|={np.abs(Te-Ts).max():.3e}  raw|M-E|={np.abs(Tm-Te).max():.3e}  piw|M-E|={(pi[:,None]*np.abs(Tm-Te)).max():.3e}")
    # reversibility of each
    print(f"     rev(expm)={np.abs(pi[:,None]*Te - (pi[:,None]*Te).T).max():.3e}  rev(mehler)={np.abs(pi[:,None]*Tm - (pi[:,None]*Tm).T).max():.3e}")

# BE commutation on censored chain, d=1: residual(n) = |DP_tF(n) - e^-t P_t(DF)(n)|
def be_resid(F, t, margin):
    Tt = expm_sym(Q, pi, t)
    PF = Tt @ F
    DF = np.zeros(N+1)
    DF[:N] = F[1:] - F[:-1]          # boundary slot -> 0
    PDF = Tt @ DF
    lhs = PF[1:] - PF[:-1]
    r = np.abs(lhs - exp(-t)*PDF[:N])
    return r[:N-margin+1].max() if margin > 0 else r.max()

rng = np.random.default_rng(7)
f_lin = np.arange(N+1, dtype=float)
for t in (0.25, 1.0):
    print(f"t={t} BE resid  iota margin4: {be_resid(f_lin, t, 4):.3e}  margin8: {be_resid(f_lin, t, 8):.3e}  margin10: {be_resid(f_lin, t, 10):.3e}")
worst = 0
for trial in range(20):
    F = np.zeros(N+1); F[:N-4+1] = rng.uniform(-1, 1, N-3)  # interior-supported margin 4
    worst = max(worst, be_resid(F, 1.0, 4))
print("interior-supported margin4 worst over 20 rand F, t=1:", f"{worst:.3e}")

# Talagrand proof route: int_0^inf sqrt(I(P*_t delta_0)) dt vs sqrt(H)
def fisher(rho):
    s, tt = rho[:-1], rho[1:]
    out = 0.0
    for a, b, pn in zip(s, tt, pi[:-1]):
        if a == b: continue
        if a <= 0 or b <= 0: return np.inf
        out += (b-a)*(log(b)-log(a))*pn*m
    return out

def H_of(rho):
    r = rho[rho > 0]
    return float(np.sum(r*np.log(r)*pi[rho > 0]))

def route(N, m, rho0):
    piL, QL = build(N, m)
    lam_all = None
    d = np.sqrt(piL)
    S = (QL*d[:,None])/d[None,:]; S = 0.5*(S+S.T)
    lam, V = eigh(S)
    def rho_t(t):
        E = (V*np.exp(t*lam)) @ V.T
        Tt = (E/d[:,None])*d[None,:]
        return Tt @ rho0
    def sqrtI(t):
        r = rho_t(t)
        s, tt = r[:-1], r[1:]
        I = np.sum((tt-s)*(np.log(tt)-np.log(s))*piL[:-1]*m)
        return sqrt(max(I, 0.0))
    from scipy.integrate import quad
    v1, e1 = quad(sqrtI, 0, 1, limit=400, points=[0])
    v2, e2 = quad(sqrtI, 1, 40, limit=400)
    return v1+v2, e1+e2

rho_delta = np.zeros(N+1); rho_delta[0] = 1/pi[0]
Hd = H_of(rho_delta)
r, err = route(N, m, rho_delta)
print(f"delta_0: H={Hd:.12f} sqrtH={sqrt(Hd):.12f} intSqrtI={r:.12f} (quad err {err:.1e})  (int)^2={r*r:.12f}")
# random positive densities
for a in (0.5, 2.0):
    for trial in range(3):
        g = rng.uniform(-a, a, N+1)
        rho = np.exp(g); rho /= np.sum(rho*pi)
        rr, _ = route(N, m, rho)
        print(f"a={a} trial{trial}: sqrtH={sqrt(H_of(rho)):.8f} intSqrtI={rr:.8f} ratio={rr/sqrt(H_of(rho)):.4f}")
