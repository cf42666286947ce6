# ruff: noqa: E402,I001,F401,Q000,E501,INP001,F403,F405
# pyright: basic

#%%
import sys
from logging import INFO, basicConfig

basicConfig(level=INFO)

from fractal_zeta import *
from fractal_zeta.sturm_liouville import *
from fractal_zeta.zeta_engine import *
from fractal_zeta.renorm_dynamics import *

#%%
alpha = float(sys.argv[-1]) if len(sys.argv) > 1 else 0.5
c = make_constants(alpha)
print(f"alpha={c.alpha} b={c.b} delta={c.delta} gamma={c.gamma}")

#%%
S = generating_set(200, c)
print(f"First roots: {S.values[:5]}")
print(f"zeta_S(4) = {zeta_S(S, 4).best}")
print(f"zeta_rho(4) = {zeta_rho(S, 4).best}")

# %%
