"""Time-slotted measurement scheduling for measurement-based quantum
networks on line resource states, with an exact stabilizer oracle."""

from .cliffords import CLIFFORD_OPS, Clifford1Q, all_single_qubit_cliffords
from .graphstate import (
    CorrectionSpec,
    Graph,
    PauliFrame,
    graph_from_json,
    local_complement,
    logical_outcome,
    measure_x,
    measure_y,
    measure_z,
    physical_basis,
)
from .scheduling import (
    ScheduleResult,
    brute_force_min_slots,
    measurement_plan,
    outer_slots,
    parallel_schedule,
    sequential_schedule,
    sweep_point,
    tstar_bounds,
)
from .simulator import (
    MissingFeedbackError,
    SimProfile,
    SimTrace,
    Verdict,
    detect_ambiguity,
    infer_order,
    load_profile,
    run_async,
    run_slotted,
    streaming_corrector,
    trace_to_jsonl,
    verify_task,
)
from .stabilizer import StabTableau, equal_up_to_local_clifford, states_equal
from .temporal import (
    Schedule,
    SlotModel,
    Task,
    Violation,
    breakpoints,
    check_adjacency,
    check_feedforward,
    earliest_slot,
    hop_distance,
    schedule_from_json,
    schedule_to_json,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CLIFFORD_OPS",
    "Clifford1Q",
    "CorrectionSpec",
    "Graph",
    "MissingFeedbackError",
    "PauliFrame",
    "Schedule",
    "ScheduleResult",
    "SimProfile",
    "SimTrace",
    "SlotModel",
    "StabTableau",
    "Task",
    "Verdict",
    "Violation",
    "all_single_qubit_cliffords",
    "breakpoints",
    "brute_force_min_slots",
    "check_adjacency",
    "check_feedforward",
    "detect_ambiguity",
    "earliest_slot",
    "equal_up_to_local_clifford",
    "graph_from_json",
    "hop_distance",
    "infer_order",
    "load_profile",
    "local_complement",
    "logical_outcome",
    "measure_x",
    "measure_y",
    "measure_z",
    "measurement_plan",
    "outer_slots",
    "parallel_schedule",
    "physical_basis",
    "run_async",
    "run_slotted",
    "schedule_from_json",
    "schedule_to_json",
    "sequential_schedule",
    "states_equal",
    "streaming_corrector",
    "sweep_point",
    "trace_to_jsonl",
    "tstar_bounds",
    "validate",
    "verify_task",
]
