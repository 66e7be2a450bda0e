import mpmath as mp
mp.mp.dps = 40

def theta(s, t):
    if s == t: return s
    if s == 0 or t == 0: return mp.mpf(0)
    return (s - t) / (mp.log(s) - mp.log(t))

def W_twopoint(m, b0, b1):
    m = mp.mpf(m); b0 = mp.mpf(b0); b1 = mp.mpf(b1)
    p0 = 1/(1+m); p1 = m/(1+m)
    def f(b):
        return 1/mp.sqrt(theta((1-b)/p0, b/p1) * p0 * m)
    mid = (b0+b1)/2
    total = mp.mpf(0)
    if b0 == 0:
        # b = e^{-y}; keep b symbolicly positive
        def fl(y):
            b = mp.e**(-y)
            return (1/mp.sqrt(theta((1-b)/p0, b/p1) * p0 * m)) * b
        total += mp.quad(fl, [-mp.log(mid), mp.inf])
    else:
        total += mp.quad(f, [b0, mid])
    if b1 == 1:
        # 1-b = e^{-y}
        def fr(y):
            u = mp.e**(-y)   # = 1-b
            return (1/mp.sqrt(theta(u/p0, (1-u)/p1) * p0 * m)) * u
        total += mp.quad(fr, [-mp.log(1-mid), mp.inf])
    else:
        total += mp.quad(f, [mid, b1])
    return total

W11 = W_twopoint(1, 0, 1)
print("W(m=1,0->1)      =", mp.nstr(W11, 20))
print("W^2              =", mp.nstr(W11**2, 20))
print("W(m=0.5,0->1)    =", mp.nstr(W_twopoint('0.5', 0, 1), 20))
print("W(m=1,0->1/2)    =", mp.nstr(W_twopoint(1, 0, '0.5'), 20))
print("W(m=2,1/4->3/4)  =", mp.nstr(W_twopoint(2, '0.25', '0.75'), 20))
raw = mp.quad(lambda b: 1/mp.sqrt(theta(1-b,b)), [mp.mpf('1e-30'), '0.5', 1-mp.mpf('1e-30')])
print("raw check (m=1)  =", mp.nstr(raw, 15))
