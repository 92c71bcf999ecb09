"""Logarithmic models of kind curves and the set U_C of admissible residues."""

from .model import (
    DivisorHData,
    LogFoliation,
    LogModel,
    UCReport,
    ZariskiReport,
    cs_indices_on_divisor,
    discriminant_test,
    discriminant_value,
    h_polynomial,
    logarithmic_form,
    membership_UC,
    resonance_check,
    uc_nonempty,
    zariski_general_check,
)

__all__ = [
    "DivisorHData",
    "LogFoliation",
    "LogModel",
    "UCReport",
    "ZariskiReport",
    "cs_indices_on_divisor",
    "discriminant_test",
    "discriminant_value",
    "h_polynomial",
    "logarithmic_form",
    "membership_UC",
    "resonance_check",
    "uc_nonempty",
    "zariski_general_check",
]

from .symbolic import dead_arc_discriminant, dead_arc_discriminant_vanishes, dead_arc_h_polynomial

__all__ += ["dead_arc_discriminant", "dead_arc_discriminant_vanishes", "dead_arc_h_polynomial"]
