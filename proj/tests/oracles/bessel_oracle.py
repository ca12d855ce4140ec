"""Frozen reference values for the Bessel and transform tests (50-digit mpmath)."""
import mpmath as mp

mp.mp.dps = 50

cases = [(0, 1), (1, 2), (5, 3), (2, mp.mpc(1, 1)), (10, mp.mpc(4, -2)),
         (3, 7.5), (20, mp.mpc(0, 5)), (0, 30), (7, mp.mpc(-12, 3))]
for n, z in cases:
    v = mp.besselj(n, z)
    print(f"J_{n}({z}) = {mp.nstr(mp.re(v), 20)} {mp.nstr(mp.im(v), 20)}")

# asymptotic ratio J_n(z) n! (2/z)^n
for n, z in [(1, 2), (25, 1), (60, 1)]:
    r = mp.besselj(n, z) * mp.factorial(n) * (2 / mp.mpf(z)) ** n
    print(f"ratio({n},{z}) = {mp.nstr(r, 20)}")

# triangle (0,0),(2,0.5),(0.3,1.7) at z = (0.7-0.2i, -0.4+0.3i): direct 2-d quadrature
v0, v1, v2 = [mp.mpf(0), mp.mpf(0)], [mp.mpf(2), mp.mpf('0.5')], [mp.mpf('0.3'), mp.mpf('1.7')]
z = [mp.mpc('0.7', '-0.2'), mp.mpc('-0.4', '0.3')]
jac = abs((v1[0] - v0[0]) * (v2[1] - v0[1]) - (v1[1] - v0[1]) * (v2[0] - v0[0]))
def f(s, u):
    x = [v0[k] + s * (v1[k] - v0[k]) + u * (v2[k] - v0[k]) for k in range(2)]
    return mp.exp(-2j * mp.pi * (x[0] * z[0] + x[1] * z[1]))
val = jac * mp.quad(lambda s: mp.quad(lambda u: f(s, u), [0, 1 - s]), [0, 1])
print("triangle =", mp.nstr(mp.re(val), 20), mp.nstr(mp.im(val), 20))
