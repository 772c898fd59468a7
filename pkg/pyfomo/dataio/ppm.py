# import modules
import os.path
import numpy
from ..errors import ImageFormatError
from ..tensor import Tensor

# define format
MAGIC = b"P6"
MAXVAL = 255
WHITESPACE = b" \t\n\r\x0b\x0c"


def read_ppm(path):
    """
    Reads binary 8-bit RGB PPM image.
    
    Args:
        path: str
            Image file path.
    
    Returns:
        numpy.ndarray
            Pixels array (h, w, 3) of uint8.
    """
    
    # check file
    if not os.path.exists(path):
        message = "Image file not found! --> '%s'" % path
        raise IOError(message)
    
    with open(path, 'rb') as rf:
        data = rf.read()
    
    return parse_ppm(data, path)


def parse_ppm(data, name="<bytes>"):
    """
    Parses binary 8-bit RGB PPM data. Comments are not allowed and the pixel
    data must follow exactly one whitespace after maxval.
    
    Args:
        data: bytes
            Image file data.
        
        name: str
            Image name used in error messages.
    
    Returns:
        numpy.ndarray
            Pixels array (h, w, 3) of uint8.
    """
    
    # check magic
    if data[:2] != MAGIC:
        message = "Image is not binary PPM (P6)! --> '%s'" % name
        raise ImageFormatError(message)
    
    # read header tokens
    tokens = []
    pos = 2
    
    while len(tokens) < 3:
        
        # single whitespace must precede each token
        if pos >= len(data) or data[pos] not in WHITESPACE:
            message = "Malformed PPM header! --> '%s'" % name
            raise ImageFormatError(message)
        
        while pos < len(data) and data[pos] in WHITESPACE:
            pos += 1
        
        start = pos
        while pos < len(data) and data[pos] not in WHITESPACE:
            pos += 1
        
        token = data[start:pos]
        if not token.isdigit():
            message = "Malformed PPM header! --> '%s' in '%s'" % (token.decode('latin-1'), name)
            raise ImageFormatError(message)
        
        tokens.append(int(token))
    
    width, height, maxval = tokens
    
    # check values
    if maxval != MAXVAL:
        message = "PPM maxval must be 255! --> '%d' in '%s'" % (maxval, name)
        raise ImageFormatError(message)
    
    if width < 1 or height < 1:
        message = "PPM image must not be empty! --> '%dx%d' in '%s'" % (width, height, name)
        raise ImageFormatError(message)
    
    if pos >= len(data) or data[pos] not in WHITESPACE:
        message = "Malformed PPM header! --> '%s'" % name
        raise ImageFormatError(message)
    
    # read pixels
    pos += 1
    size = width * height * 3
    
    if len(data) - pos != size:
        message = "PPM pixel data size mismatch! --> '%d' vs '%d' in '%s'" % (len(data) - pos, size, name)
        raise ImageFormatError(message)
    
    pixels = numpy.frombuffer(data, dtype=numpy.uint8, count=size, offset=pos)
    
    return pixels.reshape(height, width, 3).copy()


def write_ppm(path, pixels):
    """
    Writes binary 8-bit RGB PPM image.
    
    Args:
        path: str
            Output file path.
        
        pixels: numpy.ndarray
            Pixels array (h, w, 3) of uint8.
    """
    
    pixels = numpy.asarray(pixels)
    
    if pixels.ndim != 3 or pixels.shape[2] != 3 or pixels.dtype != numpy.uint8:
        message = "Pixels must be (h, w, 3) uint8 array! --> '%s' %s" % (pixels.shape, pixels.dtype)
        raise ImageFormatError(message)
    
    header = b"P6\n%d %d\n%d\n" % (pixels.shape[1], pixels.shape[0], MAXVAL)
    
    with open(path, 'wb') as wf:
        wf.write(header)
        wf.write(numpy.ascontiguousarray(pixels).tobytes())


def load_image(path):
    """
    Reads PPM image and scales pixels into [0, 1].
    
    Args:
        path: str
            Image file path.
    
    Returns:
        pyfomo.Tensor
            Image tensor (1, h, w, 3).
    """
    
    pixels = read_ppm(path)
    
    return Tensor(pixels[None].astype(numpy.float32) / 255.)


def write_image(path, image):
    """
    Writes image tensor with values in [0, 1] as PPM.
    
    Args:
        path: str
            Output file path.
        
        image: pyfomo.Tensor
            Image tensor (1, h, w, 3).
    """
    
    data = image.Array if isinstance(image, Tensor) else numpy.asarray(image)
    
    if data.ndim == 4:
        data = data[0]
    
    write_ppm(path, to_pixels(data))


def to_pixels(values):
    """Converts values in [0, 1] into uint8 pixels."""
    
    values = numpy.asarray(values, dtype=numpy.float64)
    
    return numpy.clip(numpy.floor(values * 255. + 0.5), 0, 255).astype(numpy.uint8)
