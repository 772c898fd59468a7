# import modules
import numpy
from ..enums import *
from ..lockable import Lockable
from ..errors import ConfigError, GenerationError
from ..tensor import Tensor
from ..dataio.synth import object_axes, background_colors
from ..dataio.resize import sample_bilinear

# define coverage sampling grid
COVERAGE_SAMPLES = 200

# define default RoI radius as fraction of strip height
ROI_RADIUS = (0.284, 0.288)


class RoI(Lockable):
    """
    Holds single region of interest placed on the corridor wall.
    
    Attributes:
        
        ClassId: int
            Object class (1-based).
        
        X: float
            Centroid x-coordinate along the strip in pixels.
        
        Y: float
            Centroid y-coordinate across the strip in pixels.
        
        RadiusX: float
            Horizontal semi-axis in pixels.
        
        RadiusY: float
            Vertical semi-axis in pixels.
    """
    
    
    def __init__(self, class_id, x, y, radius_x, radius_y=None):
        """Initializes a new instance of RoI."""
        
        super().__init__()
        
        self.ClassId = int(class_id)
        self.X = float(x)
        self.Y = float(y)
        self.RadiusX = float(radius_x)
        self.RadiusY = float(radius_y if radius_y is not None else radius_x)
        
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "RoI(class=%d, x=%.1f, y=%.1f, r=%.1fx%.1f)" % (self.ClassId, self.X, self.Y, self.RadiusX, self.RadiusY)
    
    
    @property
    def IsDisc(self):
        """Checks whether RoI is circular."""
        
        return self.RadiusX == self.RadiusY
    
    
    def Contains(self, xs, ys):
        """Checks whether given positions lie inside the RoI."""
        
        return ((xs - self.X) / self.RadiusX) ** 2 + ((ys - self.Y) / self.RadiusY) ** 2 <= 1.0
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {'class': self.ClassId, 'x': self.X, 'y': self.Y, 'rx': self.RadiusX, 'ry': self.RadiusY}


class View(Lockable):
    """
    Holds camera window within the strip and its mapping to frame pixels.
    
    Attributes:
        
        X0: float
            Left edge in strip pixels.
        
        Y0: float
            Top edge in strip pixels.
        
        Size: float
            Window side in strip pixels.
        
        InputSize: int
            Frame side in model input pixels.
    """
    
    
    def __init__(self, x0, y0, size, input_size):
        """Initializes a new instance of View."""
        
        super().__init__()
        
        self.X0 = float(x0)
        self.Y0 = float(y0)
        self.Size = float(size)
        self.InputSize = int(input_size)
        
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "View(x0=%.2f, y0=%.2f, size=%.2f)" % (self.X0, self.Y0, self.Size)
    
    
    @property
    def CenterX(self):
        """Gets window center x in strip pixels."""
        
        return self.X0 + self.Size / 2
    
    
    @property
    def CenterY(self):
        """Gets window center y in strip pixels."""
        
        return self.Y0 + self.Size / 2
    
    
    def ToStrip(self, x, y):
        """Converts frame position into strip position."""
        
        factor = self.Size / self.InputSize
        
        return self.X0 + x * factor, self.Y0 + y * factor
    
    
    def ToFrame(self, x, y):
        """Converts strip position into frame position."""
        
        factor = self.InputSize / self.Size
        
        return (x - self.X0) * factor, (y - self.Y0) * factor
    
    
    def Contains(self, x, y):
        """Checks whether strip position lies inside the window."""
        
        return self.X0 <= x < self.X0 + self.Size and self.Y0 <= y < self.Y0 + self.Size


class Corridor(Lockable):
    """
    The pyfomo.Corridor class holds the unrolled tunnel wall as a strip image
    together with the regions of interest placed on it. The robot camera sees
    a square window of the strip, full strip height at zoom 1.
    
    Attributes:
        
        Strip: numpy.ndarray
            Strip image (H, L, 3) with values in [0, 1].
        
        RoIs: (pyfomo.RoI,)
            Regions of interest.
        
        NumClasses: int
            Number of RoI classes.
    """
    
    
    def __init__(self, strip, rois=(), num_classes=1):
        """Initializes a new instance of Corridor."""
        
        super().__init__()
        
        strip = numpy.array(strip, dtype=numpy.float32)
        if strip.ndim == 4:
            strip = strip[0]
        
        if strip.ndim != 3 or strip.shape[2] != 3 or strip.shape[1] < strip.shape[0]:
            message = "Strip must be (H, L, 3) with L >= H! --> '%s'" % (strip.shape,)
            raise ConfigError(message)
        
        # check RoIs
        h, l, _ = strip.shape
        for i, roi in enumerate(rois):
            
            if not (roi.RadiusX <= roi.X <= l - roi.RadiusX and roi.RadiusY <= roi.Y <= h - roi.RadiusY):
                message = "RoI must lie inside the strip! --> RoI %d %r" % (i, roi)
                raise ConfigError(message)
            
            if not 1 <= roi.ClassId <= num_classes:
                message = "RoI class out of range! --> RoI %d class %d" % (i, roi.ClassId)
                raise ConfigError(message)
        
        self.Strip = strip
        self.RoIs = tuple(rois)
        self.NumClasses = int(num_classes)
        
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "Corridor(%dx%d, %d RoIs)" % (self.Height, self.Length, len(self.RoIs))
    
    
    @property
    def Height(self):
        """Gets strip height in pixels."""
        
        return self.Strip.shape[0]
    
    
    @property
    def Length(self):
        """Gets strip length in pixels."""
        
        return self.Strip.shape[1]
    
    
    @property
    def Image(self):
        """Gets strip as image tensor (1, H, L, 3)."""
        
        return Tensor(self.Strip[None])


def make_corridor(height=64, length=640, n_rois=3, contrast=0.9, radius_range=None, seed=42, num_classes=1, noise=0.05):
    """
    Creates textured corridor strip with well separated RoIs. Each RoI gets
    its own stretch of the strip away from the strip ends. By default
    the RoI radius is a little above a quarter of the strip height, so a disc
    fully inside the zoom 1 window just reaches the RoI coverage threshold.
    
    Args:
        height: int
            Strip height in pixels.
        
        length: int
            Strip length in pixels.
        
        n_rois: int
            Number of RoIs.
        
        contrast: float
            Normalized color distance between RoIs and background.
        
        radius_range: (float, float) or None
            Minimum and maximum RoI radius in pixels, None for
            pyfomo.sim.corridor.ROI_RADIUS fractions of height.
        
        seed: int
            Random seed.
        
        num_classes: int
            Number of RoI classes.
        
        noise: float
            Amplitude of per-pixel uniform jitter.
    
    Returns:
        pyfomo.Corridor
            Generated corridor.
    """
    
    if length < height:
        message = "Strip must be at least as long as high! --> '%dx%d'" % (height, length)
        raise ConfigError(message)
    
    if radius_range is None:
        radius_range = (ROI_RADIUS[0] * height, ROI_RADIUS[1] * height)
    
    rng = numpy.random.default_rng(seed)
    bg, obj = background_colors(rng, contrast, noise)
    
    # place RoIs in separate stretches
    rois = []
    if n_rois:
        
        usable = length - height
        stretch = usable / float(n_rois)
        
        for i in range(n_rois):
            
            class_id = int(rng.integers(1, num_classes + 1))
            rx, ry = object_axes(class_id, rng.uniform(*radius_range))
            
            lo = height / 2 + i * stretch + rx
            hi = height / 2 + (i + 1) * stretch - rx
            
            if lo > hi or 2 * ry > height:
                message = "RoIs do not fit into corridor! --> '%d' RoIs in '%dx%d'" % (n_rois, height, length)
                raise GenerationError(message)
            
            x = rng.uniform(lo, hi)
            y = rng.uniform(ry, height - ry)
            rois.append(RoI(class_id, x, y, rx, ry))
    
    # render strip
    strip = numpy.empty((height, length, 3))
    strip[:] = bg
    
    xs = numpy.arange(length) + 0.5
    ys = numpy.arange(height) + 0.5
    for roi in rois:
        strip[roi.Contains(xs[None, :], ys[:, None])] = obj
    
    if noise > 0:
        strip += rng.uniform(-noise, noise, size=strip.shape)
    
    return Corridor(numpy.clip(strip, 0, 1), rois, num_classes)


def window_view(corridor, state, input_size):
    """
    Gets camera window of given robot state clamped inside the strip.
    
    Args:
        corridor: pyfomo.Corridor
            Corridor.
        
        state: pyfomo.RobotState
            Robot state.
        
        input_size: int
            Model input size.
    
    Returns:
        pyfomo.View
            Camera window.
    """
    
    size = corridor.Height / state.Zoom
    focus_y = state.FocusY if state.FocusY is not None else corridor.Height / 2.
    
    x0 = min(max(state.Position - size / 2, 0.0), corridor.Length - size)
    y0 = min(max(focus_y - size / 2, 0.0), corridor.Height - size)
    
    return View(x0, y0, size, input_size)


def render_frame(corridor, state, input_size):
    """
    Renders camera frame of given robot state resized to model input.
    
    Args:
        corridor: pyfomo.Corridor
            Corridor.
        
        state: pyfomo.RobotState
            Robot state.
        
        input_size: int
            Model input size.
    
    Returns:
        pyfomo.Tensor
            Frame tensor (1, s, s, 3).
    """
    
    view = window_view(corridor, state, input_size)
    
    return render_view(corridor, view)


def render_view(corridor, view):
    """Renders frame of given camera window."""
    
    # get pixel-center sample positions in strip index coordinates
    steps = (numpy.arange(view.InputSize) + 0.5) * (view.Size / view.InputSize)
    ys = view.Y0 + steps - 0.5
    xs = view.X0 + steps - 0.5
    
    frame = sample_bilinear(corridor.Strip, ys, xs)
    
    return Tensor(frame[None].astype(numpy.float32))


def roi_coverage(roi, view):
    """
    Gets fraction of the camera window covered by the RoI. Discs fully
    inside the window are evaluated exactly, otherwise the window is sampled
    on a regular grid.
    
    Args:
        roi: pyfomo.RoI
            Region of interest.
        
        view: pyfomo.View
            Camera window.
    
    Returns:
        float
            Covered fraction within [0, 1].
    """
    
    # fully inside disc
    inside = (view.X0 <= roi.X - roi.RadiusX and roi.X + roi.RadiusX <= view.X0 + view.Size and
        view.Y0 <= roi.Y - roi.RadiusY and roi.Y + roi.RadiusY <= view.Y0 + view.Size)
    
    if inside:
        return min(1.0, numpy.pi * roi.RadiusX * roi.RadiusY / view.Size ** 2)
    
    # no overlap
    if (roi.X + roi.RadiusX <= view.X0 or roi.X - roi.RadiusX >= view.X0 + view.Size or
        roi.Y + roi.RadiusY <= view.Y0 or roi.Y - roi.RadiusY >= view.Y0 + view.Size):
        return 0.0
    
    # sample window
    steps = (numpy.arange(COVERAGE_SAMPLES) + 0.5) * (view.Size / COVERAGE_SAMPLES)
    xs = view.X0 + steps
    ys = view.Y0 + steps
    
    return float(numpy.mean(roi.Contains(xs[None, :], ys[:, None])))
