"""Capacitance-network quantization and mediated-coupling design for chains
of floating (two-pad) transmon qubits."""

__version__ = "0.1.0"

from .circuit import (BlockCapacitanceMatrix, ChainSpec, NodeCapacitanceMatrix, Scheme,
                      build_chain_blocks, build_node_matrix, import_capacitance_csv,
                      infer_uniform_spec, node_to_pm, write_capacitance_csv)
from .closedform import (AAChainForm, InfiniteChainForm, SingleEndedRatio,
                         StrongCouplingForm, aa_forms, boundary_ceff, chi_upper_bound,
                         design_capacitances, fixed_transmon_relation, infinite_chain_form,
                         qubit_cap_for_effective, single_ended_ratio, strong_coupling_form)
from .errors import (BracketingError, CsvFormatError, FeasibilityError,
                     NotPositiveDefiniteError, NumericalError, QubitChainError,
                     SingularityError, StructureError, TruncationError, ValidationError)
from .modes import (AvoidedCrossing, LinearChainModel, avoided_crossing_J, normal_modes,
                    pin_spectators)
from .reduction import (EffectiveCoupling, charge_couplings, charging_energies,
                        effective_capacitance, invert_spd)
from .report import (AnalysisReport, analyze_chain, analyze_node_matrix, center_site,
                     effective_coupling_for, render_json, sweep_coupling_parameters,
                     sweep_point)
from .spectrum import (CouplingReport, QubitSpectrum, SpectrumMethod, TransmonParams,
                       coupling_report, ej_from_inductance, transmon_spectrum)

__all__ = [name for name in dir() if not name.startswith("_")]
