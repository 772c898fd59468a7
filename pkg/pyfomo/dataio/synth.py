# import modules
import os
import os.path
import logging
import numpy
from ..enums import *
from ..errors import ConfigError, GenerationError
from .ppm import write_ppm, to_pixels
from .manifest import DatasetManifest, ManifestEntry, save_manifest

# init logger
logger = logging.getLogger(__name__)

# define ellipse aspect ratios (ry / rx) per class
ASPECTS = (1.0, 0.5, 2.0, 0.75, 1.5)

# define default manifest name
MANIFEST_FILE = "manifest.json"

# define placement retries per object
MAX_TRIES = 200


class SynthConfig(object):
    """
    Holds options of the synthetic terrain generator.
    
    Attributes:
        
        ImageSize: int
            Square image size in pixels.
        
        ImageCount: int
            Number of images.
        
        ObjectsRange: (int, int)
            Minimum and maximum number of objects per image.
        
        RadiusRange: (float, float)
            Minimum and maximum object radius in pixels.
        
        Background: str
            Background style as pyfomo.FLAT or pyfomo.NOISE.
        
        Contrast: float
            Normalized color distance between objects and background mean
            within [0, 1].
        
        NumClasses: int
            Number of object classes.
        
        Seed: int
            Random seed.
        
        Noise: float
            Amplitude of per-pixel uniform jitter.
        
        MinSeparation: float
            Minimum distance between object centroids in pixels.
    """
    
    
    def __init__(self, image_size=64, image_count=120, objects_range=(1, 3), radius_range=(3, 6), background=NOISE, contrast=0.9, num_classes=1, seed=42, noise=0.05, min_separation=18):
        """Initializes a new instance of SynthConfig."""
        
        # check values
        if image_size < 8:
            message = "Image size must be at least 8 pixels! --> '%s'" % image_size
            raise ConfigError(message)
        
        if image_count < 1:
            message = "At least one image must be generated! --> '%s'" % image_count
            raise ConfigError(message)
        
        if not 0 <= objects_range[0] <= objects_range[1]:
            message = "Invalid objects range! --> '%s'" % (objects_range,)
            raise ConfigError(message)
        
        if not 2 <= radius_range[0] <= radius_range[1]:
            message = "Object radius must be at least 2 pixels! --> '%s'" % (radius_range,)
            raise ConfigError(message)
        
        if background not in BACKGROUND:
            message = "Background must be one of the %s! --> '%s'" % (str(BACKGROUND), background)
            raise ConfigError(message)
        
        if not 0 <= contrast <= 1:
            message = "Contrast must be within [0, 1]! --> '%s'" % contrast
            raise ConfigError(message)
        
        if num_classes < 1:
            message = "At least one class is needed! --> '%s'" % num_classes
            raise ConfigError(message)
        
        if not 0 <= noise < 0.5:
            message = "Noise must be within [0, 0.5)! --> '%s'" % noise
            raise ConfigError(message)
        
        self.ImageSize = int(image_size)
        self.ImageCount = int(image_count)
        self.ObjectsRange = (int(objects_range[0]), int(objects_range[1]))
        self.RadiusRange = (float(radius_range[0]), float(radius_range[1]))
        self.Background = background
        self.Contrast = float(contrast)
        self.NumClasses = int(num_classes)
        self.Seed = int(seed)
        self.Noise = float(noise)
        self.MinSeparation = float(min_separation)
    
    
    @property
    def ClassNames(self):
        """Gets generated class names."""
        
        if self.NumClasses == 1:
            return ("roi",)
        
        return tuple("roi%d" % (i+1) for i in range(self.NumClasses))
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'image_size': self.ImageSize,
            'image_count': self.ImageCount,
            'objects_range': list(self.ObjectsRange),
            'radius_range': list(self.RadiusRange),
            'background': self.Background,
            'contrast': self.Contrast,
            'num_classes': self.NumClasses,
            'seed': self.Seed,
            'noise': self.Noise,
            'min_separation': self.MinSeparation}


def object_axes(class_id, radius):
    """
    Gets ellipse semi-axes of given class.
    
    Args:
        class_id: int
            Object class (1-based).
        
        radius: float
            Object radius in pixels.
    
    Returns:
        (float, float)
            Semi-axes (rx, ry).
    """
    
    aspect = ASPECTS[(class_id - 1) % len(ASPECTS)]
    
    if aspect <= 1:
        return radius, max(2.0, radius * aspect)
    
    return max(2.0, radius / aspect), radius


def background_colors(rng, contrast, noise):
    """
    Draws background and object colors. The object color differs from the
    background by contrast along the gray axis so that their normalized
    color distance equals contrast. The jitter headroom kept away from the
    color limits is reduced when contrast leaves no room for it.
    
    Args:
        rng: numpy.random.Generator
            Random generator.
        
        contrast: float
            Normalized color distance.
        
        noise: float
            Jitter amplitude to keep colors away from limits.
    
    Returns:
        (numpy.ndarray, numpy.ndarray)
            Background and object RGB colors.
    """
    
    # get feasible base range, headroom shrinks for contrast near 1
    headroom = max(0.0, min(noise, (1.0 - contrast) / 2.0))
    lo = headroom
    hi = max(lo, 1.0 - headroom - contrast)
    sign = 1.0 if rng.random() < 0.5 else -1.0
    
    # get gray level and tint
    base = rng.uniform(lo, hi)
    tint = rng.uniform(max(lo - base, -0.05), min(hi - base, 0.05), size=3)
    bg = base + tint
    
    # mirror for dark objects on bright background
    if sign < 0:
        bg = 1.0 - bg
    
    obj = bg + sign * contrast
    
    return bg, obj


def draw_objects(rng, config):
    """
    Places non-overlapping objects inside image borders.
    
    Args:
        rng: numpy.random.Generator
            Random generator.
        
        config: pyfomo.SynthConfig
            Generator options.
    
    Returns:
        ((int, float, float, float, float),)
            Objects as (class_id, x, y, rx, ry).
    """
    
    size = config.ImageSize
    count = int(rng.integers(config.ObjectsRange[0], config.ObjectsRange[1] + 1))
    placed = []
    
    for i in range(count):
        
        class_id = int(rng.integers(1, config.NumClasses + 1))
        radius = rng.uniform(*config.RadiusRange)
        rx, ry = object_axes(class_id, radius)
        position = None
        
        for attempt in range(MAX_TRIES):
            
            # keep inside borders
            if 2 * rx >= size or 2 * ry >= size:
                break
            
            x = rng.uniform(rx, size - rx)
            y = rng.uniform(ry, size - ry)
            
            # check overlap and separation
            if all(_apart(x, y, rx, ry, other, config.MinSeparation) for other in placed):
                position = (x, y)
                break
        
        # stop adding once the image is full
        if position is None:
            if len(placed) < config.ObjectsRange[0]:
                message = "Cannot place objects after %d tries! --> image size %d, %d objects" % (MAX_TRIES, size, count)
                raise GenerationError(message)
            break
        
        placed.append((class_id, position[0], position[1], rx, ry))
    
    return tuple(placed)


def _apart(x, y, rx, ry, other, separation):
    """Checks whether object is separated from other one."""
    
    dist = numpy.hypot(x - other[1], y - other[2])
    
    return dist > max(rx, ry) + max(other[3], other[4]) + 1 and dist >= separation


def render_image(rng, config, objects):
    """
    Renders filled ellipses over background.
    
    Args:
        rng: numpy.random.Generator
            Random generator.
        
        config: pyfomo.SynthConfig
            Generator options.
        
        objects: ((int, float, float, float, float),)
            Objects as (class_id, x, y, rx, ry).
    
    Returns:
        numpy.ndarray
            Image array (h, w, 3) with values in [0, 1].
    """
    
    size = config.ImageSize
    noise = config.Noise if config.Background == NOISE else 0.0
    
    bg, obj = background_colors(rng, config.Contrast, noise)
    image = numpy.empty((size, size, 3))
    image[:] = bg
    
    # draw ellipses, pixel centers at half-integers
    centers = numpy.arange(size) + 0.5
    for class_id, x, y, rx, ry in objects:
        mask = ((centers[None, :] - x) / rx) ** 2 + ((centers[:, None] - y) / ry) ** 2 <= 1.0
        image[mask] = obj
    
    # add jitter
    if noise > 0:
        image += rng.uniform(-noise, noise, size=image.shape)
    
    return numpy.clip(image, 0.0, 1.0)


def synthesize(config):
    """
    Generates synthetic corpus in memory.
    
    Args:
        config: pyfomo.SynthConfig
            Generator options.
    
    Returns:
        (numpy.ndarray, (((int, float, float),),))
            Pixels array (n, s, s, 3) of uint8 and objects per image as
            (class_id, x, y).
    """
    
    rng = numpy.random.default_rng(config.Seed)
    
    images = []
    objects = []
    
    for i in range(config.ImageCount):
        placed = draw_objects(rng, config)
        images.append(to_pixels(render_image(rng, config, placed)))
        objects.append(tuple((c, x, y) for c, x, y, rx, ry in placed))
    
    return numpy.stack(images), tuple(objects)


def gen_synthetic(config, output):
    """
    Generates synthetic corpus into directory as PPM images and manifest.
    
    Args:
        config: pyfomo.SynthConfig
            Generator options.
        
        output: str
            Output directory.
    
    Returns:
        pyfomo.DatasetManifest
            Written manifest.
    """
    
    images, objects = synthesize(config)
    names = config.ClassNames
    
    if not os.path.exists(output):
        os.makedirs(output)
    
    entries = []
    for i, (pixels, objs) in enumerate(zip(images, objects)):
        
        filename = "img_%05d.ppm" % i
        write_ppm(os.path.join(output, filename), pixels)
        
        items = [(names[c-1], x, y) for c, x, y in objs]
        entries.append(ManifestEntry(filename, config.ImageSize, config.ImageSize, items))
    
    manifest = DatasetManifest(names, entries, os.path.abspath(output))
    save_manifest(manifest, os.path.join(output, MANIFEST_FILE))
    
    logger.info("generated %d images, %d objects, contrast %.2f into '%s'", len(entries), sum(len(o) for o in objects), config.Contrast, output)
    
    return manifest
