"""Block error rate against the number of devices for both codes.

This is a reduced version of the full experiment, which uses two million
samples and one hundred generators per point; pass ``--full`` for that.
"""

# %%
import sys

from aircomp.harness import SweepConfig, csv_paths, emit_csv, run_sweep

full = "--full" in sys.argv
cfg = SweepConfig(snr_db_list=(2.0, 2.35),
                  samples=2_000_000 if full else 50_000,
                  generators=100 if full else 10)
result = run_sweep(cfg)

# %%
for snr in cfg.snr_db_list:
    print(f"SNR {snr:.2f} dB")
    print(" K    p  nested median [min, max]        balanced  exact")
    for row in result.rows_for(snr):
        med, lo, hi = row.nested_summary()
        print(f"{row.num_devices:2d} {row.prime:4d}  {med:.4f} [{lo:.4f}, {hi:.4f}]"
              f"   {row.balanced_rate:.4f}    {row.exact_balanced:.4f}")

# %%
# The nested code wins for a single device and degrades quickly as devices
# are added, while the balanced code's error rate does not move at all.
for snr, path in csv_paths("fig2.csv", cfg.snr_db_list).items():
    emit_csv(result, path, snr, bounds=True)
    print("wrote", path)
print(f"{result.elapsed:.1f}s")
