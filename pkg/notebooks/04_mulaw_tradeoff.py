# %% [markdown]
# # Companding trade-off
#
# Larger mu lifts small samples harder, which lowers PAPR. The receiver's
# expander then stretches the noise on those samples, which costs Eb/N0.
# Both effects are measured against uncompanded OFDM.

# %%
from pathlib import Path

import matplotlib.pyplot as plt

from stcofdm.harness import ExperimentSpec, mulaw_summary, run_mulaw_tradeoff

OUT = Path("figures")
OUT.mkdir(exist_ok=True)
MUS = [0.0, 1.0, 4.0, 10.0, 100.0]

# %%
spec = ExperimentSpec(experiment="mulaw", schemes=["dual"], mu_values=MUS,
                      ebn0_range=list(range(21)), n_loops=2, n_symbols=1000, n_frames=20_000,
                      seed=1, target_ber=1e-4)
records = run_mulaw_tradeoff(spec)
summary = mulaw_summary(records)
print(f"{'mu':>6s} {'PAPR gain (dB)':>15s} {'Eb/N0 cost (dB)':>16s}")
for mu in MUS:
    print(f"{mu:6g} {summary['papr_improvement_db'][mu]:15.2f} "
          f"{summary['ber_degradation_db'][mu]:16.2f}")

# %%
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ofdm = [r for r in records if r.metric == "ber" and r.scheme == "ofdm" and r.errors > 0]
ax1.semilogy([r.abscissa for r in ofdm], [r.value for r in ofdm], "k--", label="ofdm")
for mu in MUS:
    rows = [r for r in records
            if r.metric == "ber" and r.scheme == "dual" and r.mu == mu and r.errors > 0]
    ax1.semilogy([r.abscissa for r in rows], [r.value for r in rows], label=f"dual, mu={mu:g}")
ax1.set_xlabel("Eb/N0 (dB)")
ax1.set_ylabel("BER")
ax1.grid(True, which="both", alpha=0.3)
ax1.legend(fontsize=8)

gain = [summary["papr_improvement_db"][m] for m in MUS]
cost = [summary["ber_degradation_db"][m] for m in MUS]
ax2.plot(cost, gain, "o-")
for m, x, y in zip(MUS, cost, gain):
    ax2.annotate(f"mu={m:g}", (x, y), textcoords="offset points", xytext=(5, -10))
ax2.set_xlabel("Eb/N0 penalty at BER 1e-4 (dB)")
ax2.set_ylabel("PAPR improvement at CCDF 1e-3 (dB)")
ax2.grid(True, alpha=0.3)
fig.tight_layout()
fig.savefig(OUT / "mulaw_tradeoff.png", dpi=120)
