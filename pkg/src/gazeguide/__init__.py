"""gazeguide: deterministic driver attention-redirection simulation engine.

Pipeline: scene -> base saliency -> hazard-prior fusion -> waypoints ->
gaze-guidance trajectory -> gaze-driven cue state machine -> run metrics.
A FastAPI session service exposes the same engine to live clients.
"""

from .cues import (AudioEvent, AudioKind, CueEvent, CueEventKind, CueMachine, CueMarker,
                   CueStyle, EscalationConfig, MarkerState, Urgency, init_cues, style_for)
from .errors import (CapacityExceeded, ClockRegression, GazeGuideError, GridTooSmall,
                     MalformedMessage, NonPositiveSigma, ParseError, SceneNotFound,
                     SessionClosed, TooManyWaypoints, UnorderedSamples, ValidationError)
from .gaze import (ActiveMarkerInfo, AgentKind, FixationState, GazeAgentConfig, GazeSample,
                   IdtConfig, detect_fixation, detect_target_fixation, make_agent,
                   segment_fixations)
from .harness import (ComparisonSummary, RunConfig, RunMetrics, RunResult,
                      export_results, run_baseline_comparison, run_scenario)
from .planner import PlannedTrajectory, plan_trajectory, replan_on_deviation
from .saliency import (SaliencyConfig, SaliencyGrid, Waypoint, base_saliency,
                       extract_waypoints, fuse_hazard_prior)
from .scene import (HazardSpec, Point2, SceneObject, SceneSpec, Severity, load_scene,
                    load_scene_dir, load_scene_file, save_scene)

__version__ = "0.1.0"
