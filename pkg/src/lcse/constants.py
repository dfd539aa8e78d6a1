"""Physical constants for SI conversion of collision strengths."""

HBAR = 1.054571817e-34          # J s
BOHR_RADIUS = 5.29177210903e-11  # m
MASS_RB87 = 1.44316e-25          # kg

# Rb-87 s-wave scattering lengths, Bohr radii
RB87_A0 = 101.8
RB87_A2 = 100.4

# c2n/c0n for Rb-87, exact ratio of the strength formulas
RB87_C2_OVER_C0 = (RB87_A2 - RB87_A0) / (RB87_A0 + 2 * RB87_A2)
