"""Shared test fixtures for unit, integration and contract tests."""

import pytest

from src.config import Configuration
from src.models.patch import Orientation, PatchKind
from src.services.circuit_parser import parse_circuit
from src.services.compiler import ScheduleConfig, schedule
from src.services.grid_registry import GridRegistry
from src.services.patch_builder import build_patch
from src.services.protocols import ProtocolService
from src.services.surgery import SurgeryService
from src.services.tableau_simulator import Tableau

BELL_CIRCUIT = "qubits 2\nH q0\nCNOT q0 q1\n"


@pytest.fixture()
def make_config():
    """Factory fixture for creating Configuration instances."""

    def _make(**overrides):
        defaults = {
            "log_level": "INFO",
            "seed": 0,
            "distance": 2,
            "trn_count": 1,
            "grid": "auto",
        }
        defaults.update(overrides)
        return Configuration(**defaults)

    return _make


@pytest.fixture()
def config(make_config):
    """Default valid Configuration."""
    return make_config()


@pytest.fixture()
def make_service():
    """Factory fixture for a SurgeryService over rows x cols tile slots."""

    def _make(d=2, slots=(1, 1), seed=0, rounds=1):
        pitch = 2 * d + 2
        registry = GridRegistry(
            (slots[0] - 1) * pitch + 2 * d + 1, (slots[1] - 1) * pitch + 2 * d + 1
        )
        return SurgeryService(Tableau(registry.capacity, seed=seed), registry, rounds)

    return _make


@pytest.fixture()
def make_patch():
    """Factory fixture for a rotated patch on a service's canvas, at a tile slot."""

    def _make(service, slot=(0, 0), patch_id="p", d=2, orientation=Orientation.STANDARD):
        pitch = 2 * d + 2
        return build_patch(
            service.registry,
            PatchKind.ROTATED,
            d,
            (slot[0] * pitch, slot[1] * pitch),
            orientation,
            patch_id,
        )

    return _make


@pytest.fixture()
def make_bay(make_service, make_patch):
    """Factory fixture: (protocols, control, trn, target) with TRN in |+>_L."""

    def _make(d=2, seed=0, slots=(2, 2)):
        service = make_service(d=d, slots=slots, seed=seed)
        protocols = ProtocolService(service)
        control = make_patch(service, (0, 0), "c", d)
        trn = make_patch(service, (1, 0), "trn", d)
        target = make_patch(service, (1, 1), "t", d)
        protocols.reset_plus(trn)
        return protocols, control, trn, target

    return _make


@pytest.fixture()
def make_schedule():
    """Factory fixture compiling circuit text."""

    def _make(text=BELL_CIRCUIT, **overrides):
        return schedule(parse_circuit(text), ScheduleConfig(**overrides))

    return _make
