# %% [markdown]
# # BER against Eb/N0
#
# Every waveform here carries BPSK-equivalent information per bit, so all
# four curves should sit on top of the closed-form BPSK line. The sweep is
# small enough to finish in seconds; raise `N_LOOPS` for tighter error bars.

# %%
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

from stcofdm.harness import ExperimentSpec, run_ber_sweep
from stcofdm.metrics import theoretical_ber_bpsk
from stcofdm.modem import Scheme

OUT = Path("figures")
OUT.mkdir(exist_ok=True)
N_LOOPS = 4

# %%
spec = ExperimentSpec(schemes=list(Scheme), ebn0_range=list(range(11)), n_loops=N_LOOPS,
                      n_symbols=1000, seed=1)
records = run_ber_sweep(spec)

# %% [markdown]
# Each row carries the raw error count and a Wilson interval, which becomes
# the error bar.

# %%
fig, ax = plt.subplots(figsize=(6, 4))
grid = np.linspace(0, 10, 101)
ax.semilogy(grid, [theoretical_ber_bpsk(x) for x in grid], "k-", lw=1, label="Q(sqrt(2Eb/N0))")
for scheme, marker in zip(Scheme, "osd^"):
    rows = [r for r in records if r.scheme == scheme.value and r.errors > 0]
    x = np.array([r.abscissa for r in rows])
    y = np.array([r.value for r in rows])
    err = np.array([[r.value - r.ci_low, r.ci_high - r.value] for r in rows]).T
    ax.errorbar(x, y, yerr=err, fmt=marker, ms=4, mfc="none", label=scheme.value)
ax.set_xlabel("Eb/N0 (dB)")
ax.set_ylabel("BER")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "ber_curves.png", dpi=120)

# %%
for r in records:
    if r.abscissa in (0.0, 6.0, 10.0):
        print(f"{r.scheme:5s} {r.abscissa:4.1f} dB  {r.value:.3e}  ({r.errors}/{r.trials})")
