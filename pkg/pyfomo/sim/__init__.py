# import objects
from .corridor import RoI, View, Corridor, make_corridor, window_view, render_frame, render_view, roi_coverage
from .robot import EmphasisParams, RobotState, CRUISE_SPEED, advance, ef_look_close, ef_slow_down
from .episode import ModelDetector, OracleDetector, SimReport, run_episode, TRAJECTORY_COLUMNS
