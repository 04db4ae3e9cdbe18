"""Entangled-state constructions and measurement-based protocols.

Covers three families of maximally entangled two-party states (two-qubit
Bell states, qubit-mode hybrid states built on even/odd cat states, and
two-mode parity Bell states), the projective measurements in those bases,
and the protocols running on them: teleporting a spin qubit through a
hybrid channel, teleporting a parity qubit onto a spin, and entanglement
swapping between two hybrid pairs.

Parties are always laid out in the order their subscripts suggest: the
sender's qubit first, then channel factors in index order. Measurements
draw exactly one uniform variate from the supplied RngStream and select an
outcome by inverse CDF over the branch probabilities, so a seed fixes the
full transcript.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .fock import (
    DEFAULT_RESIDUAL_TOL,
    FactorKind,
    SpaceDescriptor,
    StateVector,
    apply,
    even_coherent,
    inner,
    odd_coherent,
    partial_inner,
    tensor,
)
from .pseudospin import PAULI_X, PAULI_Y, PAULI_Z, Operator, build_pseudospin

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_QUBIT = SpaceDescriptor.qubit()

_UP = np.array([1.0, 0.0], dtype=complex)
_DOWN = np.array([0.0, 1.0], dtype=complex)


class SpinBellLabel(Enum):
    PSI_PLUS = "Psi+"
    PSI_MINUS = "Psi-"
    PHI_PLUS = "Phi+"
    PHI_MINUS = "Phi-"


class HesLabel(Enum):
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"


class ParityBellLabel(Enum):
    PHI_PLUS = "phi~+"
    PHI_MINUS = "phi~-"
    PSI_PLUS = "psi~+"
    PSI_MINUS = "psi~-"


class Correction(Enum):
    """Conditional single-party fix-up after a Bell measurement."""

    IDENTITY = "identity"
    S_Z = "s_z"
    S_X = "s_x"
    S_Y = "s_y"


def _is_phi(label) -> bool:
    return label in (
        SpinBellLabel.PHI_PLUS,
        SpinBellLabel.PHI_MINUS,
        HesLabel.PHI_PLUS,
        HesLabel.PHI_MINUS,
        ParityBellLabel.PHI_PLUS,
        ParityBellLabel.PHI_MINUS,
    )


def _is_plus(label) -> bool:
    return label in (
        SpinBellLabel.PSI_PLUS,
        SpinBellLabel.PHI_PLUS,
        HesLabel.PSI_PLUS,
        HesLabel.PHI_PLUS,
        ParityBellLabel.PSI_PLUS,
        ParityBellLabel.PHI_PLUS,
    )


@dataclass
class RngStream:
    """Counted, seeded source of uniform variates for measurement sampling."""

    seed: int
    counter: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._gen = np.random.default_rng(self.seed)

    def uniform(self) -> float:
        self.counter += 1
        return float(self._gen.random())


@dataclass(frozen=True)
class TeleportRecord:
    """Transcript of one teleportation run."""

    outcome: SpinBellLabel | ParityBellLabel
    outcome_probability: float
    correction: Correction
    output_state: StateVector
    target_state: StateVector
    fidelity: float

    def __post_init__(self) -> None:
        if not -1e-12 <= self.outcome_probability <= 1.0 + 1e-12:
            raise ValueError(f"outcome probability {self.outcome_probability!r}")
        if not -1e-9 <= self.fidelity <= 1.0 + 1e-9:
            raise ValueError(f"fidelity {self.fidelity!r} outside [0, 1]")


@dataclass(frozen=True)
class SwapRecord:
    """Transcript of one entanglement-swapping run."""

    outcome: SpinBellLabel
    parity_label: ParityBellLabel
    probability: float
    fidelity: float
    mode_state: StateVector


def spin_bell_state(label: SpinBellLabel) -> StateVector:
    """Two-qubit Bell state, amplitudes ordered (uu, ud, du, dd)."""
    up, dn = _UP, _DOWN
    if label is SpinBellLabel.PSI_PLUS:
        amps = np.kron(up, dn) + np.kron(dn, up)
    elif label is SpinBellLabel.PSI_MINUS:
        amps = np.kron(up, dn) - np.kron(dn, up)
    elif label is SpinBellLabel.PHI_PLUS:
        amps = np.kron(up, up) + np.kron(dn, dn)
    else:
        amps = np.kron(up, up) - np.kron(dn, dn)
    return StateVector(_QUBIT * _QUBIT, amps * _SQRT_HALF)


def hes_state(
    label: HesLabel,
    z: float,
    dim: int,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> StateVector:
    """Qubit-mode hybrid Bell state at cat amplitude z.

    The psi states pair spin-up with the odd cat component, the phi states
    pair spin-up with the even one; signs follow the label.
    """
    e = even_coherent(z, dim, residual_tol)
    o = odd_coherent(z, dim, residual_tol)
    sign = 1.0 if _is_plus(label) else -1.0
    if _is_phi(label):
        amps = np.kron(_UP, e.amps) + sign * np.kron(_DOWN, o.amps)
    else:
        amps = np.kron(_UP, o.amps) + sign * np.kron(_DOWN, e.amps)
    residual = 0.5 * (e.truncation_residual + o.truncation_residual)
    return StateVector(_QUBIT * e.space, amps * _SQRT_HALF, residual)


def parity_bell_state(
    label: ParityBellLabel,
    z: float,
    z_prime: float,
    dim: int,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> StateVector:
    """Two-mode entangled cat pair at amplitudes (z, z_prime)."""
    e1 = even_coherent(z, dim, residual_tol)
    o1 = odd_coherent(z, dim, residual_tol)
    e2 = even_coherent(z_prime, dim, residual_tol)
    o2 = odd_coherent(z_prime, dim, residual_tol)
    sign = 1.0 if _is_plus(label) else -1.0
    if _is_phi(label):
        amps = np.kron(e1.amps, e2.amps) + sign * np.kron(o1.amps, o2.amps)
        residual = 0.5 * (
            e1.truncation_residual
            + e2.truncation_residual
            + o1.truncation_residual
            + o2.truncation_residual
        )
    else:
        amps = np.kron(e1.amps, o2.amps) + sign * np.kron(o1.amps, e2.amps)
        residual = 0.5 * (
            e1.truncation_residual
            + o2.truncation_residual
            + o1.truncation_residual
            + e2.truncation_residual
        )
    return StateVector(e1.space * e2.space, amps * _SQRT_HALF, residual)


def _validate_qubit_amps(alpha: complex, beta: complex) -> None:
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm2 - 1.0) > 1e-12:
        raise ValueError(
            f"input qubit amplitudes are not normalized: |a|^2 + |b|^2 = {norm2!r}"
        )


def decompose_teleport_input(
    alpha: complex,
    beta: complex,
    z: float,
    channel: HesLabel,
    dim: int,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> list[tuple[SpinBellLabel, StateVector]]:
    """Expand (unknown qubit) x (hybrid channel) over the sender's Bell basis.

    Returns the four (outcome, conditional mode state) pairs; each branch
    carries weight 1/2, so summing Bell x branch / 2 reassembles the input
    product state exactly.
    """
    _validate_qubit_amps(alpha, beta)
    spin = StateVector(_QUBIT, np.array([alpha, beta]))
    joint = tensor(spin, hes_state(channel, z, dim, residual_tol))
    mode_space = joint.space.subspace((2,))
    out = []
    for label in SpinBellLabel:
        branch = 2.0 * partial_inner(spin_bell_state(label), joint, (0, 1))
        out.append(
            (label, StateVector(mode_space, branch, joint.truncation_residual))
        )
    return out


def correction_for(outcome: SpinBellLabel, channel: HesLabel) -> Correction:
    """Mode-side fix-up for a sender Bell outcome over a given channel.

    Matching family and sign need no correction; a sign mismatch within the
    family is a parity phase flip; crossing families costs a parity flip,
    with s_y absorbing the extra sign.
    """
    same_family = _is_phi(outcome) == _is_phi(channel)
    same_sign = _is_plus(outcome) == _is_plus(channel)
    if same_family:
        return Correction.IDENTITY if same_sign else Correction.S_Z
    return Correction.S_X if same_sign else Correction.S_Y


def parity_correction_for(outcome: ParityBellLabel, channel: HesLabel) -> Correction:
    """Spin-side Pauli fix-up after a parity Bell measurement."""
    same_family = _is_phi(outcome) == _is_phi(channel)
    same_sign = _is_plus(outcome) == _is_plus(channel)
    if same_family:
        return Correction.IDENTITY if same_sign else Correction.S_Z
    return Correction.S_X if same_sign else Correction.S_Y


def _branch_projections(state, bras, factors):
    """Project onto each (label, bra); returns [(label, amplitude, prob)]."""
    branches = []
    for label, bra in bras:
        amp = partial_inner(bra, state, factors)
        branches.append((label, amp, float(np.real(np.vdot(amp, amp)))))
    return branches


def _sample_branch(state, branches, factors, rng, total):
    """Inverse-CDF draw over the branch probabilities, then collapse."""
    u = rng.uniform() * total
    acc = 0.0
    chosen = None
    for label, amp, p in branches:
        acc += p
        if u < acc and p > 0.0:
            chosen = (label, amp, p)
            break
    if chosen is None:  # u landed on the floating-point remainder
        chosen = max(branches, key=lambda t: t[2])
    label, amp, p = chosen
    rest = tuple(i for i in range(state.space.nfactors) if i not in factors)
    collapsed = StateVector(
        state.space.subspace(rest), amp / math.sqrt(p), state.truncation_residual
    )
    return label, p, collapsed


def _check_kinds(state: StateVector, indices: tuple[int, ...], kind: FactorKind):
    if len(set(indices)) != len(indices):
        raise ValueError(f"measured factors must be distinct, got {indices}")
    for i in indices:
        if not 0 <= i < state.space.nfactors:
            raise ValueError(f"factor index {i} out of range")
        if state.space.kind(i) is not kind:
            raise ValueError(
                f"factor {i} of {state.space.describe()} is not a {kind.value}"
            )


def spin_bell_probabilities(
    state: StateVector, qubit_indices: tuple[int, int]
) -> dict[SpinBellLabel, float]:
    """Outcome distribution of a Bell measurement on two qubit factors."""
    _check_kinds(state, qubit_indices, FactorKind.QUBIT)
    bras = [(label, spin_bell_state(label)) for label in SpinBellLabel]
    branches = _branch_projections(state, bras, qubit_indices)
    return {label: p for label, _, p in branches}


def measure_spin_bell(
    state: StateVector, qubit_indices: tuple[int, int], rng: RngStream
) -> tuple[SpinBellLabel, float, StateVector]:
    """Projective Bell measurement on two qubit factors.

    Returns the sampled outcome, its probability, and the renormalized
    state on the remaining factors (the measured qubits are removed).
    """
    _check_kinds(state, qubit_indices, FactorKind.QUBIT)
    bras = [(label, spin_bell_state(label)) for label in SpinBellLabel]
    branches = _branch_projections(state, bras, qubit_indices)
    return _sample_branch(state, branches, qubit_indices, rng, 1.0)


def _parity_bell_bras(
    state: StateVector,
    mode_indices: tuple[int, int],
    z: float,
    z_prime: float,
    residual_tol: float,
) -> list[tuple[ParityBellLabel, StateVector]]:
    i, j = mode_indices
    di = state.space.dims[i]
    dj = state.space.dims[j]
    e1, o1 = even_coherent(z, di, residual_tol), odd_coherent(z, di, residual_tol)
    e2 = even_coherent(z_prime, dj, residual_tol)
    o2 = odd_coherent(z_prime, dj, residual_tol)
    space = e1.space * e2.space
    combos = {
        ParityBellLabel.PHI_PLUS: (e1, e2, o1, o2, 1.0),
        ParityBellLabel.PHI_MINUS: (e1, e2, o1, o2, -1.0),
        ParityBellLabel.PSI_PLUS: (e1, o2, o1, e2, 1.0),
        ParityBellLabel.PSI_MINUS: (e1, o2, o1, e2, -1.0),
    }
    bras = []
    for label, (a1, a2, b1, b2, sign) in combos.items():
        amps = (np.kron(a1.amps, a2.amps) + sign * np.kron(b1.amps, b2.amps))
        bras.append((label, StateVector(space, amps * _SQRT_HALF)))
    return bras


def parity_bell_probabilities(
    state: StateVector,
    mode_indices: tuple[int, int],
    z: float,
    z_prime: float,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> dict[ParityBellLabel, float]:
    """Outcome distribution of a parity Bell measurement on two mode factors."""
    _check_kinds(state, mode_indices, FactorKind.MODE)
    bras = _parity_bell_bras(state, mode_indices, z, z_prime, residual_tol)
    branches = _branch_projections(state, bras, mode_indices)
    return {label: p for label, _, p in branches}


def measure_parity_bell(
    state: StateVector,
    mode_indices: tuple[int, int],
    z: float,
    z_prime: float,
    rng: RngStream,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> tuple[ParityBellLabel, float, StateVector]:
    """Projective measurement in the entangled two-cat basis at (z, z_prime).

    The four basis states span only the 4-dimensional even/odd product
    subspace of the two modes, so the input must lie in that span; weight
    outside it above 1e-10 is an error rather than a fifth outcome.
    """
    _check_kinds(state, mode_indices, FactorKind.MODE)
    bras = _parity_bell_bras(state, mode_indices, z, z_prime, residual_tol)
    branches = _branch_projections(state, bras, mode_indices)
    total = sum(p for _, _, p in branches)
    if 1.0 - total > 1e-10:
        raise ValueError(
            f"state carries weight {1.0 - total:.3e} outside the span of the "
            f"parity Bell basis at (z={z!r}, z'={z_prime!r})"
        )
    return _sample_branch(state, branches, mode_indices, rng, total)


def parity_measurement(
    state: StateVector, mode_index: int, rng: RngStream
) -> tuple[int, float, StateVector]:
    """Measure the photon-number parity of one mode factor in place."""
    _check_kinds(state, (mode_index,), FactorKind.MODE)
    dims = state.space.dims
    t = state.amps.reshape(dims)
    occ = np.arange(dims[mode_index])
    even_mask = (occ % 2 == 0)
    shape = [1] * len(dims)
    shape[mode_index] = dims[mode_index]
    mask = even_mask.reshape(shape)
    even_part = np.where(mask, t, 0.0)
    p_even = float(np.real(np.vdot(even_part, even_part)))
    u = rng.uniform()
    if u < p_even:
        part, p, outcome = even_part, p_even, 1
    else:
        part, p, outcome = np.where(mask, 0.0, t), 1.0 - p_even, -1
    collapsed = StateVector(
        state.space, part.reshape(-1) / math.sqrt(p), state.truncation_residual
    )
    return outcome, p, collapsed


_CORRECTION_PAULI = {
    Correction.S_Z: PAULI_Z,
    Correction.S_X: PAULI_X,
    Correction.S_Y: PAULI_Y,
}


def _teleport_target(
    correction: Correction, alpha: complex, beta: complex, z: float, dim: int,
    residual_tol: float,
) -> StateVector:
    """Analytic post-correction state on the receiving mode.

    The parity-flipped codewords s_plus|z>_o and s_minus|z>_e are unit
    vectors of even/odd parity respectively, so the cross-family branches
    target their superposition rather than the literal cat codewords.
    """
    e = even_coherent(z, dim, residual_tol)
    o = odd_coherent(z, dim, residual_tol)
    if correction in (Correction.IDENTITY, Correction.S_Z):
        amps = alpha * e.amps + beta * o.amps
    else:
        ops = build_pseudospin(dim)
        amps = alpha * (ops.s_plus.matrix @ o.amps) + beta * (
            ops.s_minus.matrix @ e.amps
        )
    residual = 0.5 * (e.truncation_residual + o.truncation_residual)
    return StateVector(e.space, amps, residual)


def teleport_spin(
    alpha: complex,
    beta: complex,
    channel: HesLabel,
    z: float,
    dim: int,
    rng: RngStream,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> TeleportRecord:
    """Teleport an unknown spin qubit onto the mode of a hybrid channel.

    The sender Bell-measures her qubit against the channel qubit; the
    conditional mode state is fixed up by the parity operation the outcome
    dictates and compared against the analytic branch target.
    """
    _validate_qubit_amps(alpha, beta)
    spin = StateVector(_QUBIT, np.array([alpha, beta]))
    joint = tensor(spin, hes_state(channel, z, dim, residual_tol))
    outcome, p, mode3 = measure_spin_bell(joint, (0, 1), rng)
    correction = correction_for(outcome, channel)
    if correction is Correction.IDENTITY:
        output = mode3
    else:
        ops = build_pseudospin(dim)
        op = {
            Correction.S_Z: ops.s_z,
            Correction.S_X: ops.s_x,
            Correction.S_Y: ops.s_y,
        }[correction]
        output = apply(op, mode3, 0)
    target = _teleport_target(correction, alpha, beta, z, dim, residual_tol)
    fidelity = abs(inner(target, output)) ** 2
    return TeleportRecord(outcome, p, correction, output, target, fidelity)


def teleport_parity(
    alpha: complex,
    beta: complex,
    z_dblprime: float,
    channel: HesLabel,
    z: float,
    dim: int,
    rng: RngStream,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> TeleportRecord:
    """Teleport an unknown parity qubit at amplitude z_dblprime onto a spin.

    The joint state is (channel qubit, channel mode at z, input mode at
    z_dblprime); the sender measures the two modes in the entangled-cat
    basis at (z_dblprime, z) and the spin picks up the matching Pauli.
    """
    _validate_qubit_amps(alpha, beta)
    e = even_coherent(z_dblprime, dim, residual_tol)
    o = odd_coherent(z_dblprime, dim, residual_tol)
    mode_in = StateVector(
        e.space,
        alpha * e.amps + beta * o.amps,
        0.5 * (e.truncation_residual + o.truncation_residual),
    )
    joint = tensor(hes_state(channel, z, dim, residual_tol), mode_in)
    outcome, p, spin_out = measure_parity_bell(
        joint, (2, 1), z_dblprime, z, rng, residual_tol
    )
    correction = parity_correction_for(outcome, channel)
    if correction is Correction.IDENTITY:
        output = spin_out
    else:
        pauli = Operator(_QUBIT, _CORRECTION_PAULI[correction])
        output = apply(pauli, spin_out, 0)
    target = StateVector(_QUBIT, np.array([alpha, beta]))
    fidelity = abs(inner(target, output)) ** 2
    return TeleportRecord(outcome, p, correction, output, target, fidelity)


_SWAP_PAIRING = {
    SpinBellLabel.PHI_PLUS: (ParityBellLabel.PHI_PLUS, 0.5),
    SpinBellLabel.PHI_MINUS: (ParityBellLabel.PHI_MINUS, -0.5),
    SpinBellLabel.PSI_PLUS: (ParityBellLabel.PSI_PLUS, -0.5),
    SpinBellLabel.PSI_MINUS: (ParityBellLabel.PSI_MINUS, 0.5),
}


def swap_expansion_coefficients(
    z: float,
    z_prime: float,
    dim: int,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> list[tuple[SpinBellLabel, ParityBellLabel, complex]]:
    """Coefficients of psi- x psi- over (spin Bell on 1,3) x (cat Bell on 2,4)."""
    joint = tensor(
        hes_state(HesLabel.PSI_MINUS, z, dim, residual_tol),
        hes_state(HesLabel.PSI_MINUS, z_prime, dim, residual_tol),
    )
    out = []
    for spin_label, (parity_label, _) in _SWAP_PAIRING.items():
        sb = spin_bell_state(spin_label).amps.reshape(2, 2)
        pb = parity_bell_state(parity_label, z, z_prime, dim, residual_tol)
        # bra factor order matches the joint layout (qubit1, mode2, qubit3, mode4)
        bra = np.einsum("ik,jl->ijkl", sb, pb.amps.reshape(dim, dim))
        out.append(
            (spin_label, parity_label, complex(np.vdot(bra.reshape(-1), joint.amps)))
        )
    return out


def swap_entanglement(
    z: float,
    z_prime: float,
    dim: int,
    rng: RngStream,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> SwapRecord:
    """Swap entanglement between two hybrid pairs by a joint spin measurement.

    Builds psi-(z) on parties (1,2) and psi-(z') on (3,4), checks the signed
    half-weight expansion over the paired Bell bases, measures the two
    qubits (1,3), and verifies the modes (2,4) collapse onto the partnered
    entangled-cat state.
    """
    for spin_label, parity_label, coeff in swap_expansion_coefficients(
        z, z_prime, dim, residual_tol
    ):
        expected = _SWAP_PAIRING[spin_label][1]
        if abs(coeff - expected) > 1e-10:
            raise ValueError(
                f"expansion coefficient for ({spin_label.value}, "
                f"{parity_label.value}) is {coeff!r}, expected {expected}"
            )
    joint = tensor(
        hes_state(HesLabel.PSI_MINUS, z, dim, residual_tol),
        hes_state(HesLabel.PSI_MINUS, z_prime, dim, residual_tol),
    )
    outcome, p, modes = measure_spin_bell(joint, (0, 2), rng)
    parity_label = _SWAP_PAIRING[outcome][0]
    target = parity_bell_state(parity_label, z, z_prime, dim, residual_tol)
    fidelity = abs(inner(target, modes)) ** 2
    if fidelity < 1.0 - 1e-9:
        raise ValueError(
            f"modes failed to collapse onto {parity_label.value} "
            f"(fidelity {fidelity!r})"
        )
    return SwapRecord(outcome, parity_label, p, fidelity, modes)
