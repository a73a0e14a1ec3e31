# %% [markdown]
# # Spectra and occupied bandwidth
#
# Welch estimates of each transmit stream, plotted against absolute
# frequency. STC-OFDM and Fast-OFDM squeeze the same bit rate into half the
# band of conventional OFDM; dual-STC spends the full band on twice the bits.

# %%
from pathlib import Path

import matplotlib.pyplot as plt

from stcofdm.harness import psd_capture
from stcofdm.metrics import occupied_bandwidth
from stcofdm.modem import Scheme, SchemeConfig

OUT = Path("figures")
OUT.mkdir(exist_ok=True)

# %%
estimates = {}
for scheme in Scheme:
    cfg = SchemeConfig.default(scheme)
    est, _ = psd_capture(cfg, 400_000, seed=1)
    estimates[scheme] = est

reference = occupied_bandwidth(estimates[Scheme.OFDM])
for scheme, est in estimates.items():
    bw = occupied_bandwidth(est)
    print(f"{scheme.value:5s} 99% bandwidth {bw / 1e3:8.1f} kHz  ratio {bw / reference:.3f}")

# %%
fig, ax = plt.subplots(figsize=(7, 4))
for scheme, est in estimates.items():
    ax.plot(est.freqs / 1e3, est.power_db, lw=0.8, label=scheme.value)
ax.set_xlabel("frequency (kHz)")
ax.set_ylabel("PSD (dB/Hz)")
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "psd.png", dpi=120)
