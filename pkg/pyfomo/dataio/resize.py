# import modules
import numpy
from ..errors import ShapeError
from ..tensor import Tensor


def resize(image, target):
    """
    Resizes image into square target by bilinear interpolation. Sample
    positions use pixel centers and are clamped at the borders.
    
    Args:
        image: pyfomo.Tensor
            Image tensor (1, h, w, c).
        
        target: int
            Target size in pixels.
    
    Returns:
        pyfomo.Tensor
            Resized image (1, target, target, c).
    """
    
    data = image.Array if isinstance(image, Tensor) else numpy.asarray(image, dtype=numpy.float32)
    
    if target < 1:
        message = "Target size must be positive! --> '%s'" % target
        raise ShapeError(message)
    
    return Tensor(resize_array(data, target, target))


def resize_array(data, height, width):
    """
    Resizes 4-D array by bilinear interpolation.
    
    Args:
        data: numpy.ndarray
            Images array (n, h, w, c).
        
        height: int
            Target height.
        
        width: int
            Target width.
    
    Returns:
        numpy.ndarray
            Resized array as float32.
    """
    
    n, h, w, c = data.shape
    
    if (h, w) == (height, width):
        return numpy.array(data, dtype=numpy.float32)
    
    y0, y1, ty = _sample_axis(h, height)
    x0, x1, tx = _sample_axis(w, width)
    
    src = data.astype(numpy.float64)
    
    # interpolate rows
    top = src[:, y0]
    bottom = src[:, y1]
    rows = top + (bottom - top) * ty[None, :, None, None]
    
    # interpolate columns
    left = rows[:, :, x0]
    right = rows[:, :, x1]
    out = left + (right - left) * tx[None, None, :, None]
    
    return out.astype(numpy.float32)


def sample_bilinear(data, ys, xs):
    """
    Samples single image at real pixel positions by bilinear interpolation.
    Integer positions hit pixel centers.
    
    Args:
        data: numpy.ndarray
            Image array (h, w, c).
        
        ys: numpy.ndarray
            Row positions (oh,).
        
        xs: numpy.ndarray
            Column positions (ow,).
    
    Returns:
        numpy.ndarray
            Sampled array (oh, ow, c) as float64.
    """
    
    h, w, c = data.shape
    
    y0, y1, ty = _neighbors(numpy.asarray(ys, dtype=numpy.float64), h)
    x0, x1, tx = _neighbors(numpy.asarray(xs, dtype=numpy.float64), w)
    
    src = data.astype(numpy.float64)
    
    top = src[y0]
    bottom = src[y1]
    rows = top + (bottom - top) * ty[:, None, None]
    
    left = rows[:, x0]
    right = rows[:, x1]
    
    return left + (right - left) * tx[None, :, None]


def rescale_objects(objects, src_width, src_height, target):
    """
    Rescales object centroids by the same factors as image resize.
    
    Args:
        objects: ((?, float, float),)
            Objects as (class, x, y).
        
        src_width: int
            Source image width.
        
        src_height: int
            Source image height.
        
        target: int
            Target size in pixels.
    
    Returns:
        ((?, float, float),)
            Rescaled objects.
    """
    
    fx = target / float(src_width)
    fy = target / float(src_height)
    
    return tuple((c, x * fx, y * fy) for c, x, y in objects)


def _sample_axis(size, target):
    """Gets neighbor indices and weights of half-pixel aligned samples."""
    
    pos = (numpy.arange(target) + 0.5) * (size / float(target)) - 0.5
    
    return _neighbors(pos, size)


def _neighbors(pos, size):
    """Gets clamped neighbor indices and interpolation weights."""
    
    pos = numpy.clip(pos, 0, size - 1)
    i0 = numpy.floor(pos).astype(numpy.int64)
    i1 = numpy.minimum(i0 + 1, size - 1)
    
    return i0, i1, pos - i0
