"""Walk through the array signal model: steering vectors, a random scenario,
and how the sample covariance converges to the ensemble covariance.

Run:  python3 demos/array_model.py
"""

import numpy as np

from copra_beam.arraysim import (
    ArrayGeometry, draw_scenario, sample_covariance, steering_vector,
    synthesize_snapshots, true_covariance,
)


def main():
    geometry = ArrayGeometry(n_elements=10, spacing_wavelengths=0.5)
    a0 = steering_vector(geometry, 0.0)
    a30 = steering_vector(geometry, 30.0)
    print("steering vector at broadside is all ones:", np.allclose(a0, 1.0))
    print("||a||^2 = n_elements:", np.allclose(np.vdot(a30, a30).real, 10.0))
    # beam pattern of a unity-weighted array: response vs direction
    doas = np.linspace(-90.0, 90.0, 7)
    print("\nunity-weight response |a(0)^H a(doa)| / n:")
    for doa in doas:
        resp = abs(np.vdot(a0, steering_vector(geometry, doa))) / 10.0
        print("  %6.1f deg  %s" % (doa, "#" * int(round(40 * resp))))

    rng = np.random.default_rng(0)
    sc = draw_scenario(rng, geometry, snr_db=10.0, inr_db=30.0)
    print("\nscenario: SOI at %.2f deg, presumed look direction off by %.2f deg"
          % (sc.soi_doa_deg, sc.soi_error_deg))
    print("interferers at %s deg, each 30 dB above noise"
          % ", ".join("%.2f" % d for d in sc.interferer_doas_deg))

    c_true = true_covariance(sc)
    for n_s in (30, 300, 3000, 30000):
        c_hat = sample_covariance(synthesize_snapshots(sc, n_s, rng))
        err = np.linalg.norm(c_hat - c_true) / np.linalg.norm(c_true)
        print("sample covariance from %5d snapshots: relative error %.3f"
              % (n_s, err))


if __name__ == "__main__":
    main()
