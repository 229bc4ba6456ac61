"""High-precision reference values frozen into the C++ unit tests."""
from mpmath import mp, mpf, log, exp, sqrt, e

mp.dps = 40

def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")

show("psi_entropic(0.9,0.1)", mpf("0.9") * log(mpf("0.9")) + mpf("0.1") * log(mpf("0.1")) + log(2))
show("psi_star_entropic(1,0)", log(e + 1) - log(2))
show("bregman_entropic((1,0),(0,0))", log((e + 1) / 2) - mpf("0.5"))
show("dual_of(0.75,0.25)[0]", (log(mpf("0.75")) - log(mpf("0.25"))) / 2)
show("softmax(ln3,0)[0]", exp(log(3)) / (exp(log(3)) + 1))
show("eta(10), alpha_r=0.8", mpf("0.8") * mpf(10) ** mpf("-0.2"))
show("sigma_star^2(10)", mpf("0.01") * mpf(10) ** mpf("0.4"))
show("envelope(b=100)", sqrt(100 * log(log(100))))
show("sumexp e", e)
