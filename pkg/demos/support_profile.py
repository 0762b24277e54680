"""Where the normalised transform lives: scan alpha and read off q and a(m).

Run: python3 demos/support_profile.py
"""

from fractions import Fraction

from selberg1 import build_L_element, enumerate_characters, stirling_constants
from selberg1.detector import detect_q, extract_coeffs, find_peaks, scan_support
from selberg1.transform import eq5_predict, limit_estimate

T = 1e5

for chi, A0 in ((enumerate_characters(4)[1], 0.0), (enumerate_characters(3)[1], 0.5)):
    el = build_L_element(chi, A0)
    sc = stirling_constants(el.fe)
    print(f"\n{el.label}: A = {sc.A:+.6f}, C = {sc.C:.6f}, pi C Q^2 = {3.141592653589793 * sc.C * el.fe.Q**2:.6f}")

    profile = scan_support(el, sc, T, 12, 2)
    peaks = find_peaks(profile)
    print("  peaks on the 1/12 grid:", ", ".join(str(a) for a in peaks))
    print("  detected q =", detect_q(profile, sc, el.fe))

    # the limit at a peak against its closed-form prediction
    for m in range(1, chi.modulus + 1):
        alpha = Fraction(m, chi.modulus)
        lim = limit_estimate(el, sc, alpha, (T / 2, T))
        pred = eq5_predict(el, sc, alpha)
        print(f"  alpha={str(alpha):>4}  limit {lim.value:.4f}  predicted {pred:.4f}  spread {lim.spread:.1e}")

    table = extract_coeffs(el, sc, chi.modulus, T, 2 * chi.modulus)
    print("  recovered a(m):", " ".join(f"{c.value:.3f}" for c in table))
