"""Measure the convergence order of the elastic plane-wave benchmark.

A superposed p/s-wave travels along the diagonal of a periodic square; at
t = 3*sqrt(2) every mode has moved an integer number of periods, so the
initial field is also the exact solution and the L2 error is clean.
"""

import numpy as np

from aderdg.mesh import build_mesh
from aderdg.models import Elastic2D, ElasticParams
from aderdg.scenarios import PlaneWaveExact, pswave_init
from aderdg.solver import DomainSolver
from aderdg.output import observed_orders, format_convergence_text

params = ElasticParams(lam=2.0, mu=1.0, rho=1.0)
exact = PlaneWaveExact(params)
t_end = 3.0 * np.sqrt(2.0)
degree = 3

levels = [10, 15, 20]
errors = []
for nc in levels:
    mesh = build_mesh([(-1.5, 1.5), (-1.5, 1.5)], (nc, nc))
    solver = DomainSolver(mesh, Elastic2D(params), degree)
    solver.set_initial(lambda p: pswave_init(p, params))
    t = 0.0
    while t < t_end:
        dt = min(solver.compute_dt(0.30), t_end - t)
        solver.step(t, dt)
        t = t_end if t + dt >= t_end else t + dt
    err = solver.l2_error(lambda p: exact(p, t_end),
                          transform=lambda a: a[..., [3, 4, 0, 1, 2]])
    errors.append(err)
    print(f"mesh {nc}x{nc}: L2 errors (u, v, sxx, syy, sxy) =",
          " ".join(f"{e:.3e}" for e in err))

orders = observed_orders(np.array(errors), levels)
print()
print(format_convergence_text(degree, levels, np.array(errors), orders,
                              ["u", "v", "sxx", "syy", "sxy"]))
print("expected order:", degree + 1)
