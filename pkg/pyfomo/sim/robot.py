# import modules
from ..enums import *
from ..lockable import Lockable
from ..errors import ConfigError

# define robot limits
CRUISE_SPEED = 4.0
MIN_ZOOM = 1.0
MAX_ZOOM = 4.0


class EmphasisParams(Lockable):
    """
    Holds parameters of the emphasis function.
    
    Attributes:
        
        ApproachZoom: float
            Zoom reached at the end of the approach ramp.
        
        DwellFrames: int
            Number of frames spent in emphasis mode and refractory period
            after it.
        
        SlowFactor: float
            Speed multiplier applied in emphasis mode.
        
        Tau: float
            Detection confidence needed to trigger emphasis.
        
        RecenterGain: float
            Fraction of the offset to the target removed per frame.
    """
    
    
    def __init__(self, approach_zoom=2.5, dwell_frames=12, slow_factor=0.3, tau=0.5, recenter_gain=0.5):
        """Initializes a new instance of EmphasisParams."""
        
        super().__init__()
        
        if not MIN_ZOOM <= approach_zoom <= MAX_ZOOM:
            message = "Approach zoom must be within [%g, %g]! --> '%s'" % (MIN_ZOOM, MAX_ZOOM, approach_zoom)
            raise ConfigError(message)
        
        if dwell_frames < 1:
            message = "Dwell must be at least one frame! --> '%s'" % dwell_frames
            raise ConfigError(message)
        
        if not 0 < slow_factor <= 1:
            message = "Slow factor must be within (0, 1]! --> '%s'" % slow_factor
            raise ConfigError(message)
        
        if not 0 <= recenter_gain <= 1:
            message = "Recenter gain must be within [0, 1]! --> '%s'" % recenter_gain
            raise ConfigError(message)
        
        self.ApproachZoom = float(approach_zoom)
        self.DwellFrames = int(dwell_frames)
        self.SlowFactor = float(slow_factor)
        self.Tau = float(tau)
        self.RecenterGain = float(recenter_gain)
        
        self.Lock()
    
    
    def Replace(self, **kwargs):
        """Creates copy of current params with given values replaced."""
        
        values = self.ToJSON()
        values.update(kwargs)
        
        return EmphasisParams(**values)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'approach_zoom': self.ApproachZoom,
            'dwell_frames': self.DwellFrames,
            'slow_factor': self.SlowFactor,
            'tau': self.Tau,
            'recenter_gain': self.RecenterGain}


class RobotState(Lockable):
    """
    Holds robot state within the corridor. The state is immutable, every
    step creates a new one.
    
    Attributes:
        
        Position: float
            Window center along the strip in pixels.
        
        Zoom: float
            Camera zoom within [1, 4], the window side is height / zoom.
        
        Speed: float
            Forward motion in pixels per frame.
        
        Mode: str
            Robot mode as pyfomo.CRUISE or pyfomo.EMPHASIS.
        
        Remaining: int
            Frames left in emphasis mode.
        
        Refractory: int
            Frames left before emphasis can trigger again.
        
        FocusY: float or None
            Window center across the strip, None for strip center.
        
        Target: (float, float) or None
            Strip position of the emphasized detection.
        
        CruiseSpeed: float
            Speed in cruise mode.
    """
    
    
    def __init__(self, position, zoom=1.0, speed=None, mode=CRUISE, remaining=0, refractory=0, focus_y=None, target=None, cruise_speed=CRUISE_SPEED):
        """Initializes a new instance of RobotState."""
        
        super().__init__()
        
        # check values
        if not MIN_ZOOM <= zoom <= MAX_ZOOM:
            message = "Zoom must be within [%g, %g]! --> '%s'" % (MIN_ZOOM, MAX_ZOOM, zoom)
            raise ConfigError(message)
        
        if mode not in ROBOT_MODE:
            message = "Unknown robot mode specified! --> '%s'" % mode
            raise ConfigError(message)
        
        self.Position = float(position)
        self.Zoom = float(zoom)
        self.Speed = float(speed if speed is not None else cruise_speed)
        self.Mode = mode
        self.Remaining = int(remaining)
        self.Refractory = int(refractory)
        self.FocusY = float(focus_y) if focus_y is not None else None
        self.Target = tuple(target) if target is not None else None
        self.CruiseSpeed = float(cruise_speed)
        
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "RobotState(x=%.2f, zoom=%.2f, speed=%.2f, %s)" % (self.Position, self.Zoom, self.Speed, self.Mode)
    
    
    def Replace(self, **kwargs):
        """Creates copy of current state with given values replaced."""
        
        values = {
            'position': self.Position,
            'zoom': self.Zoom,
            'speed': self.Speed,
            'mode': self.Mode,
            'remaining': self.Remaining,
            'refractory': self.Refractory,
            'focus_y': self.FocusY,
            'target': self.Target,
            'cruise_speed': self.CruiseSpeed}
        
        values.update(kwargs)
        
        return RobotState(**values)


def advance(state, offset=1.0):
    """
    Moves robot forward by its speed without any emphasis.
    
    Args:
        state: pyfomo.RobotState
            Current state.
        
        offset: float
            Speed multiplier for motion jitter.
    
    Returns:
        pyfomo.RobotState
            Next state.
    """
    
    return state.Replace(
        position = state.Position + state.Speed * offset,
        refractory = max(0, state.Refractory - 1))


def ef_look_close(detections, state, view, params=None, offset=1.0):
    """
    Applies the look-close emphasis function. A confident detection in cruise
    mode switches the robot into emphasis mode, slows it down and starts
    approaching the detection by zooming in while recentering the window on
    it. After the dwell the robot returns to cruise and ignores detections
    for a refractory period of the same length.
    
    Args:
        detections: (pyfomo.Detection,)
            Detections of current frame in frame pixels.
        
        state: pyfomo.RobotState
            Current state.
        
        view: pyfomo.View
            Camera window of current frame.
        
        params: pyfomo.EmphasisParams or None
            Emphasis parameters.
        
        offset: float
            Speed multiplier for motion jitter.
    
    Returns:
        pyfomo.RobotState
            Next state.
    """
    
    if params is None:
        params = EmphasisParams()
    
    # get most confident detection
    best = None
    for det in detections:
        if det.Confidence >= params.Tau and (best is None or det.Confidence > best.Confidence):
            best = det
    
    # cruise
    if state.Mode == CRUISE:
        
        if best is None or state.Refractory > 0:
            return advance(state, offset)
        
        state = state.Replace(
            mode = EMPHASIS,
            remaining = params.DwellFrames,
            speed = state.CruiseSpeed * params.SlowFactor,
            target = view.ToStrip(best.X, best.Y))
    
    # track target
    elif best is not None:
        state = state.Replace(target = view.ToStrip(best.X, best.Y))
    
    # leave emphasis
    if state.Remaining <= 0:
        return state.Replace(
            position = state.Position + state.CruiseSpeed * offset,
            zoom = MIN_ZOOM,
            speed = state.CruiseSpeed,
            mode = CRUISE,
            remaining = 0,
            refractory = params.DwellFrames,
            focus_y = None,
            target = None)
    
    # ramp zoom
    step = (params.ApproachZoom - MIN_ZOOM) / params.DwellFrames
    zoom = min(params.ApproachZoom, state.Zoom + step)
    
    # recenter on target
    tx, ty = state.Target
    focus_y = view.CenterY if state.FocusY is None else state.FocusY
    position = state.Position + params.RecenterGain * (tx - state.Position)
    focus_y = focus_y + params.RecenterGain * (ty - focus_y)
    
    return state.Replace(
        position = position + state.Speed * offset,
        zoom = zoom,
        remaining = state.Remaining - 1,
        focus_y = focus_y)


def ef_slow_down(detections, state, view, params=None, offset=1.0):
    """
    Applies the slow-down emphasis function, which is the look-close
    behavior without zooming in.
    
    Args:
        detections: (pyfomo.Detection,)
            Detections of current frame in frame pixels.
        
        state: pyfomo.RobotState
            Current state.
        
        view: pyfomo.View
            Camera window of current frame.
        
        params: pyfomo.EmphasisParams or None
            Emphasis parameters.
        
        offset: float
            Speed multiplier for motion jitter.
    
    Returns:
        pyfomo.RobotState
            Next state.
    """
    
    if params is None:
        params = EmphasisParams()
    
    return ef_look_close(detections, state, view, params.Replace(approach_zoom=MIN_ZOOM), offset)
