"""Registers every experiment group with the shared registry."""
from nullasym.experiments import registry
from nullasym.experiments.analysis import analysis_bp
from nullasym.experiments.classical import classical_bp
from nullasym.experiments.fock import fock_bp
from nullasym.experiments.smearing import smearing_bp

registry.register_group(classical_bp)
registry.register_group(smearing_bp)
registry.register_group(analysis_bp)
registry.register_group(fock_bp)
