"""qembed.vqe package exports."""

from qembed.vqe.ansatz import QuccsdSpec, build_qcc_ansatz, build_qcc_pool, build_quccsd
from qembed.vqe.optimizers import minimize
from qembed.vqe.solver import qcc_energy_scan, vqe_minimize, vqe_property_report

__all__ = [
    "QuccsdSpec",
    "build_qcc_ansatz",
    "build_qcc_pool",
    "build_quccsd",
    "minimize",
    "qcc_energy_scan",
    "vqe_minimize",
    "vqe_property_report",
]
