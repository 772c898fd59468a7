# import modules
import csv
import json
import logging
import numpy
from ..enums import *
from ..lockable import Lockable
from ..errors import ConfigError
from ..model import FomoModel
from ..decode import Detection, detect
from .corridor import window_view, render_view, roi_coverage
from .robot import RobotState, EmphasisParams, CRUISE_SPEED, advance, ef_look_close, ef_slow_down

# init logger
logger = logging.getLogger(__name__)

# define trajectory columns
TRAJECTORY_COLUMNS = ("frame", "position", "focus_y", "zoom", "speed", "mode", "detections", "coverage")

# define emphasis functions
EMPHASIS_FUNCTIONS = {
    LOOK_CLOSE: ef_look_close,
    SLOW_DOWN: ef_slow_down}


class ModelDetector(object):
    """Runs FOMO model on simulator frames."""
    
    
    def __init__(self, model, tau=0.5):
        """Initializes a new instance of ModelDetector."""
        
        self.Model = model
        self.Tau = float(tau)
    
    
    @property
    def NumClasses(self):
        """Gets number of detected classes."""
        
        return self.Model.Config.NumClasses
    
    
    @property
    def InputSize(self):
        """Gets frame size."""
        
        return self.Model.Config.InputSize
    
    
    def Detect(self, frame, view):
        """Detects objects in given frame."""
        
        return detect(self.Model, frame, self.Tau)


class OracleDetector(object):
    """
    Reports every RoI whose centroid lies inside the camera window with full
    confidence, used in place of a trained model.
    """
    
    
    def __init__(self, corridor, input_size=64):
        """Initializes a new instance of OracleDetector."""
        
        self.Corridor = corridor
        self.InputSize = int(input_size)
    
    
    @property
    def NumClasses(self):
        """Gets number of detected classes."""
        
        return self.Corridor.NumClasses
    
    
    def Detect(self, frame, view):
        """Gets detections of visible RoIs."""
        
        detections = []
        
        for roi in self.Corridor.RoIs:
            if view.Contains(roi.X, roi.Y):
                x, y = view.ToFrame(roi.X, roi.Y)
                detections.append(Detection(roi.ClassId, 1.0, x, y))
        
        return tuple(detections)


class SimReport(Lockable):
    """
    The pyfomo.SimReport class holds the outcome of one corridor pass.
    
    Attributes:
        
        TotalFrames: int
            Number of rendered frames.
        
        EmphasisFrames: int
            Number of frames captured in emphasis mode.
        
        RoiFrames: int
            Number of frames where any RoI covers at least a quarter of the
            window.
        
        Dwell: (int,)
            Number of frames each RoI centroid was inside the window.
        
        Trajectory: (tuple,)
            Per-frame records following TRAJECTORY_COLUMNS.
        
        EFEnabled: bool
            Whether emphasis function was active.
        
        EFKind: str
            Emphasis function kind.
    """
    
    
    def __init__(self, total_frames, emphasis_frames, roi_frames, dwell, trajectory=(), ef_enabled=True, ef_kind=LOOK_CLOSE):
        """Initializes a new instance of SimReport."""
        
        super().__init__()
        
        if not (0 <= emphasis_frames <= total_frames and 0 <= roi_frames <= total_frames):
            message = "Frame counts exceed total frames! --> '%d/%d of %d'" % (emphasis_frames, roi_frames, total_frames)
            raise ConfigError(message)
        
        self.TotalFrames = int(total_frames)
        self.EmphasisFrames = int(emphasis_frames)
        self.RoiFrames = int(roi_frames)
        self.Dwell = tuple(int(x) for x in dwell)
        self.Trajectory = tuple(trajectory)
        self.EFEnabled = bool(ef_enabled)
        self.EFKind = ef_kind
        
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "SimReport(frames=%d, emphasis=%d, roi=%d)" % (self.TotalFrames, self.EmphasisFrames, self.RoiFrames)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'ef_enabled': self.EFEnabled,
            'ef_kind': self.EFKind,
            'total_frames': self.TotalFrames,
            'emphasis_frames': self.EmphasisFrames,
            'roi_frames': self.RoiFrames,
            'dwell': list(self.Dwell)}
    
    
    def ToText(self):
        """Gets human readable summary."""
        
        lines = [
            "emphasis: %s" % (self.EFKind if self.EFEnabled else "off"),
            "total frames: %d" % self.TotalFrames,
            "emphasis frames: %d" % self.EmphasisFrames,
            "RoI frames: %d" % self.RoiFrames]
        
        for i, dwell in enumerate(self.Dwell):
            lines.append("RoI %d dwell: %d" % (i, dwell))
        
        return "\n".join(lines)
    
    
    def Save(self, path):
        """
        Writes report summary as JSON document.
        
        Args:
            path: str
                Output file path.
        """
        
        with open(path, 'w', encoding='utf-8') as wf:
            json.dump(self.ToJSON(), wf, indent=4, ensure_ascii=False)
    
    
    def WriteTrajectory(self, path):
        """
        Writes per-frame trajectory as CSV file.
        
        Args:
            path: str
                Output file path.
        """
        
        with open(path, 'w', encoding='utf-8', newline='') as wf:
            
            writer = csv.writer(wf)
            writer.writerow(TRAJECTORY_COLUMNS)
            
            for record in self.Trajectory:
                writer.writerow(record)


def run_episode(corridor, detector, ef_enabled=True, seed=42, ef_kind=LOOK_CLOSE, params=None, cruise_speed=CRUISE_SPEED, speed_jitter=0.0, max_frames=None):
    """
    Runs the robot through the corridor until its window center reaches the
    strip end. Each frame is rendered, passed to the detector and, when
    enabled, to the emphasis function which gives the next state.
    
    Args:
        corridor: pyfomo.Corridor
            Corridor to traverse.
        
        detector: pyfomo.FomoModel, pyfomo.OracleDetector or pyfomo.ModelDetector
            Detector to run per frame.
        
        ef_enabled: bool
            Whether emphasis function is active.
        
        seed: int
            Random seed for motion jitter.
        
        ef_kind: str
            Emphasis function as pyfomo.LOOK_CLOSE or pyfomo.SLOW_DOWN.
        
        params: pyfomo.EmphasisParams or None
            Emphasis parameters.
        
        cruise_speed: float
            Cruise speed in pixels per frame.
        
        speed_jitter: float
            Relative amplitude of uniform speed noise.
        
        max_frames: int or None
            Hard limit on episode length.
    
    Returns:
        pyfomo.SimReport
            Episode report.
    """
    
    if params is None:
        params = EmphasisParams()
    
    if ef_kind not in EMPHASIS_FUNCTIONS:
        message = "Unknown emphasis function specified! --> '%s'" % ef_kind
        raise ConfigError(message)
    
    if cruise_speed <= 0:
        message = "Cruise speed must be positive! --> '%s'" % cruise_speed
        raise ConfigError(message)
    
    # wrap model
    if isinstance(detector, FomoModel):
        detector = ModelDetector(detector, params.Tau)
    
    # check classes
    if detector.NumClasses != corridor.NumClasses:
        message = "Detector classes do not match corridor! --> '%d' vs '%d'" % (detector.NumClasses, corridor.NumClasses)
        raise ConfigError(message)
    
    if max_frames is None:
        max_frames = int(10 * corridor.Length / cruise_speed) + 1
    
    function = EMPHASIS_FUNCTIONS[ef_kind]
    rng = numpy.random.default_rng(seed)
    
    # init state
    half = corridor.Height / 2.
    end = corridor.Length - half
    state = RobotState(half, cruise_speed=cruise_speed)
    
    emphasis_frames = 0
    roi_frames = 0
    dwell = [0] * len(corridor.RoIs)
    trajectory = []
    
    while state.Position < end and len(trajectory) < max_frames:
        
        # render frame
        view = window_view(corridor, state, detector.InputSize)
        frame = render_view(corridor, view)
        detections = detector.Detect(frame, view)
        
        # update counters
        coverage = 0.0
        for i, roi in enumerate(corridor.RoIs):
            coverage = max(coverage, roi_coverage(roi, view))
            if view.Contains(roi.X, roi.Y):
                dwell[i] += 1
        
        if coverage >= ROI_COVERAGE:
            roi_frames += 1
        
        if state.Mode == EMPHASIS:
            emphasis_frames += 1
        
        trajectory.append((len(trajectory), state.Position, view.CenterY, state.Zoom, state.Speed, state.Mode, len(detections), coverage))
        
        # move robot
        offset = 1.0 + speed_jitter * rng.uniform(-1.0, 1.0)
        
        if ef_enabled:
            state = function(detections, state, view, params, offset)
        else:
            state = advance(state, offset)
    
    report = SimReport(len(trajectory), emphasis_frames, roi_frames, dwell, trajectory, ef_enabled, ef_kind)
    logger.info("episode %s frames %d emphasis %d roi %d", ef_kind if ef_enabled else "off", report.TotalFrames, report.EmphasisFrames, report.RoiFrames)
    
    return report
