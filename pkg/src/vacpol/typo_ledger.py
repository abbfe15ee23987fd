"""Machine-generated discrepancy report: printed formula variants against their oracles.

Every entry pairs the value of a formula as printed with an independent
reference (quadrature, exact identity, or the conventional definition) at a
few sample points.  Entries are identified by descriptive ids.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .context import PhysicalContext
from .coulomb_waves import coulomb_normalization, sommerfeld_eta
from .field_equation import appendix_asymptotes, field_coefficient_p
from .fourier import (
    uehling_spectral_closed,
    uehling_spectral_closed_a_form,
    uehling_spectral_corrected,
    uehling_spectral_oracle,
    wk_spectral_closed,
    wk_spectral_corrected,
    wk_spectral_oracle,
)
from .o21_algebra import hausdorff_residual
from .potentials import uehling_closed, uehling_tridiagonal
from .scattering import differential_cross_section


@dataclass(frozen=True)
class TypoSample:
    point: float
    printed: float
    reference: float
    relative_discrepancy: float


@dataclass(frozen=True)
class TypoEntry:
    id: str
    quantity: str
    reference_kind: str
    description: str
    samples: list[TypoSample] = field(default_factory=list)

    @property
    def max_discrepancy(self) -> float:
        return max((s.relative_discrepancy for s in self.samples), default=0.0)


@dataclass(frozen=True)
class TypoLedger:
    entries: list[TypoEntry]
    corrected_checks: list[TypoEntry]

    def entry(self, id: str) -> TypoEntry:
        for e in self.entries + self.corrected_checks:
            if e.id == id:
                return e
        raise KeyError(id)

    def to_dict(self) -> dict:
        def conv(e: TypoEntry):
            d = asdict(e)
            d["max_discrepancy"] = e.max_discrepancy
            return d

        return {"entries": [conv(e) for e in self.entries], "corrected_checks": [conv(e) for e in self.corrected_checks]}


def _rel(printed: float, reference: float) -> float:
    if reference == 0:
        return abs(printed)
    return abs(printed - reference) / abs(reference)


def _sample(point, printed, reference) -> TypoSample:
    return TypoSample(float(point), float(printed), float(reference), _rel(printed, reference))


def spectral_discrepancy_entries(ctx: PhysicalContext, k_alpha: np.ndarray) -> tuple[list[TypoEntry], TypoEntry]:
    """Uehling spectral-function entries (printed k-form, printed a-form) and the corrected-form check.

    ``k_alpha`` are sample values of ``k alpha``.
    """
    ks = [ctx.from_atomic(x / ctx.alpha, "wavenumber") for x in k_alpha]
    oracle = [uehling_spectral_oracle(k, ctx) for k in ks]
    k_form = TypoEntry(
        "uehling_spectral_k_form",
        "u(k)",
        "quadrature_oracle",
        "k-form of the Uehling spectral function: the logarithm term carries the wrong sign and the factor 1/2 "
        "of the a-form is dropped; negative and growing like -ln k at large k while the transform is positive.",
        [_sample(x, uehling_spectral_closed(k, ctx), o) for x, k, o in zip(k_alpha, ks, oracle)],
    )
    a_form = TypoEntry(
        "uehling_spectral_a_form",
        "u(k)",
        "quadrature_oracle",
        "a-form (a = k alpha / 2) of the Uehling spectral function: the first substitution step subtracts 1/2 "
        "where it must add it, flipping the logarithm term; diverges as a -> 0 instead of tending to 4 alpha^3 Q / 15.",
        [_sample(x, uehling_spectral_closed_a_form(k, ctx), o) for x, k, o in zip(k_alpha, ks, oracle)],
    )
    corrected = TypoEntry(
        "uehling_spectral_corrected",
        "u(k)",
        "quadrature_oracle",
        "re-derived closed form (2 alpha^3 Q / 3) I(k alpha / 2) against the oracle.",
        [_sample(x, uehling_spectral_corrected(k, ctx), o) for x, k, o in zip(k_alpha, ks, oracle)],
    )
    return [k_form, a_form], corrected


def build_typo_ledger(ctx: PhysicalContext | None = None, k_count: int = 6) -> TypoLedger:
    """Evaluate every printed variant against its reference."""
    ctx = ctx or PhysicalContext()
    al = ctx.alpha
    entries: list[TypoEntry] = []
    checks: list[TypoEntry] = []

    zs = [0.5, 2.0, 8.0, 20.0]
    entries.append(
        TypoEntry(
            "uehling_tridiagonal_sign_swap",
            "U(z)",
            "closed_form_identity",
            "regrouping with q = z^2 + 11: (q - 1) on K0 and (q + 1) on Ki2 are swapped; "
            "the identity holds with (q + 1) K0 - z Ki1 - (q - 1) Ki2.",
            [_sample(z, uehling_tridiagonal(z, ctx, verbatim=True), uehling_closed(ctx.from_atomic(0.5 * z * al, "length"), ctx)) for z in zs],
        )
    )

    k_alpha = np.geomspace(0.1, 10.0, k_count)
    spectral, corrected = spectral_discrepancy_entries(ctx, k_alpha)
    entries.extend(spectral)
    checks.append(corrected)

    wk_ka = np.geomspace(0.01, 20.0, k_count)
    wk_ks = [ctx.from_atomic(x / al, "wavenumber") for x in wk_ka]
    wk_oracle = [wk_spectral_oracle(k, ctx) for k in wk_ks]
    entries.append(
        TypoEntry(
            "wichmann_kroll_spectral_missing_inverse_r",
            "w_K(k)",
            "quadrature_oracle",
            "exponential spectral form of the regularized Wichmann-Kroll potential: it is the transform of "
            "-2 Q^3 alpha^7 / (225 pi (r^2 + alpha^2)^2), i.e. the 1/r factor is missing.",
            [_sample(x, wk_spectral_closed(k, ctx), o) for x, k, o in zip(wk_ka, wk_ks, wk_oracle)],
        )
    )
    checks.append(
        TypoEntry(
            "wichmann_kroll_spectral_corrected",
            "w_K(k)",
            "quadrature_oracle",
            "exponential-integral form of the regularized Wichmann-Kroll transform against the oracle.",
            [_sample(x, wk_spectral_corrected(k, ctx), o) for x, k, o in zip(wk_ka, wk_ks, wk_oracle)],
        )
    )

    entries.append(
        TypoEntry(
            "sommerfeld_eta_square_root",
            "eta",
            "conventional_definition",
            "square-root form sqrt(mu |q1 q2| / k) of the Sommerfeld parameter against mu q1 q2 / k "
            "(dimensionally inconsistent in atomic units and loses the sign).",
            [_sample(k, sommerfeld_eta(-1.0, 1.0, math.inf, k, verbatim=True), sommerfeld_eta(-1.0, 1.0, math.inf, k)) for k in (0.5, 1.0, 4.0)],
        )
    )
    entries.append(
        TypoEntry(
            "coulomb_normalization_phase",
            "|C_l(eta)|",
            "conventional_definition",
            "normalization with the phase e^{-i eta / 2} in place of the Gamow factor e^{-pi eta / 2}; "
            "compared by modulus.",
            [_sample(eta, abs(coulomb_normalization(0, eta, verbatim=True)), coulomb_normalization(0, eta)) for eta in (-1.0, 0.5, 2.0)],
        )
    )

    pts = []
    for theta in (0.5, 1.5, 3.0):
        cs = differential_cross_section(theta, 1.0, 0.01, 1.0 / abs(ctx.charge_product), ctx)
        pts.append(_sample(theta, cs.dsigma, cs.amplitude_squared))
    entries.append(
        TypoEntry(
            "cross_section_prefactor",
            "dsigma/dOmega at k = 1",
            "amplitude_squared",
            "three-term interference cross-section with prefactor Q^2 / (2 v^2) against |f|^2, whose prefactor is "
            "eta^2 / (4 k^2) = Q^2 / (4 v^4); the bracket agrees term by term.",
            pts,
        )
    )

    entries.append(
        TypoEntry(
            "hausdorff_scaling_reading",
            "e^{-i beta T}(S + U)e^{i beta T}",
            "matrix_exponential",
            "right-hand side read as the matrix exp(beta T)(S + U) instead of the scalar e^{beta}(S + U); "
            "relative residual of each reading on the interior block.",
            [
                TypoSample(
                    beta,
                    hausdorff_residual(0, 12, beta, verbatim=True),
                    hausdorff_residual(0, 12, beta),
                    hausdorff_residual(0, 12, beta, verbatim=True),
                )
                for beta in (0.05, 0.1, 0.2)
            ],
        )
    )

    p = field_coefficient_p(ctx)
    large = appendix_asymptotes("large", p, ctx.charge_product * p)
    entries.append(
        TypoEntry(
            "field_equation_large_r",
            "phi'(r) r^2 at large r",
            "cardano_root",
            "large-r solution phi = 2 (p/3)^{1/2} r + c implies a constant field; the real root actually decays as "
            "-q / (p r^2).  Sample: printed slope times r^2 at r = 1e4 r_c against the fitted limit y r^2.",
            [_sample(1e4, large.printed_large_r_slope * (1e4 * math.sqrt(abs(ctx.charge_product * p)) / p**0.75) ** 2, large.limit_value)],
        )
    )
    return TypoLedger(entries, checks)
