"""Board-splitting game engine, tournament harness, and trap-miss model.

A vertical and a horizontal player alternately cut a random 0/1 board
down to a single cell; depth-limited minimax plays the game with
swappable tip evaluators.  The package exists to measure how win rates
and decision quality respond to search depth under an evaluator that
only counts ones versus one that also recognizes forced-win patterns,
and to compare both against an analytic trap-miss probability model.
"""

__version__ = "0.1.0"

from .board import (
    BoardView,
    ConfigurationTooLarge,
    GameConfig,
    Player,
    RootBoard,
    TrapKind,
    count_ones,
    detect_trap,
    dump_text,
    generate_board,
    load_text,
    split,
    trap_aware_score,
)
from .search import (
    EvaluatorKind,
    ExactResult,
    MoveDecision,
    choose_move,
    exact_solve,
    is_correct_exact,
    is_correct_trapwise,
    minimax_value,
    tip_level,
)
from .analysis import (
    AnalysisParams,
    McChoiceResult,
    ModelPoint,
    PropagationTrace,
    count_eval_error_prob,
    error_model_curve,
    fair_p,
    geometric_side,
    max_count_nontrap_prob,
    mc_max_count_nontrap,
    mc_propagate,
    model_side,
    p0_curve,
    propagate_to_root,
    random_miss_prob,
    random_miss_prob_sum,
    row_trap_prob,
    trap_count_pmf,
)
from .experiments import (
    DecisionQualityResult,
    PathologyIndex,
    TournamentResult,
    TournamentSpec,
    decision_quality,
    decision_quality_csv,
    drop_z_scores,
    pathology_index,
    play_game,
    run_tournament,
    tournament_csv,
)
from .rng import derive_seed, mix64, unit_float

__all__ = [
    "AnalysisParams",
    "BoardView",
    "ConfigurationTooLarge",
    "DecisionQualityResult",
    "EvaluatorKind",
    "ExactResult",
    "GameConfig",
    "McChoiceResult",
    "ModelPoint",
    "MoveDecision",
    "PathologyIndex",
    "Player",
    "PropagationTrace",
    "RootBoard",
    "TournamentResult",
    "TournamentSpec",
    "TrapKind",
    "choose_move",
    "count_eval_error_prob",
    "count_ones",
    "decision_quality",
    "decision_quality_csv",
    "derive_seed",
    "detect_trap",
    "drop_z_scores",
    "dump_text",
    "error_model_curve",
    "exact_solve",
    "fair_p",
    "generate_board",
    "geometric_side",
    "is_correct_exact",
    "is_correct_trapwise",
    "load_text",
    "max_count_nontrap_prob",
    "mc_max_count_nontrap",
    "mc_propagate",
    "minimax_value",
    "mix64",
    "model_side",
    "p0_curve",
    "pathology_index",
    "play_game",
    "propagate_to_root",
    "random_miss_prob",
    "random_miss_prob_sum",
    "row_trap_prob",
    "run_tournament",
    "split",
    "tip_level",
    "tournament_csv",
    "trap_aware_score",
    "trap_count_pmf",
    "unit_float",
]
