# import modules
import numpy
from ..enums import *
from ..errors import ShapeError, ConfigError
from .tensor import Tensor


def output_size(size, kernel, stride, padding):
    """
    Gets output spatial size of a convolution along one axis.
    
    Args:
        size: int
            Input size.
        
        kernel: int
            Kernel size.
        
        stride: int
            Convolution stride.
        
        padding: str
            Padding mode as pyfomo.SAME or pyfomo.VALID.
    
    Returns:
        int
            Output size.
    """
    
    return _pad_amounts(size, kernel, stride, padding)[0]


def conv2d(input, weights, bias, stride=1, padding=SAME):
    """
    Calculates discrete 2-D cross-correlation plus bias.
    
    Args:
        input: pyfomo.Tensor
            Input tensor (n, h, w, cin).
        
        weights: pyfomo.Tensor
            Kernel tensor (kh, kw, cin, cout).
        
        bias: (float,)
            Bias per output channel.
        
        stride: int
            Convolution stride.
        
        padding: str
            Padding mode as pyfomo.SAME or pyfomo.VALID.
    
    Returns:
        pyfomo.Tensor
            Output tensor (n, hout, wout, cout).
    """
    
    # check shapes
    if input.Shape[3] != weights.Shape[2]:
        message = "Input channels do not match kernel! --> '%s' vs '%s'" % (input.Shape, weights.Shape)
        raise ShapeError(message)
    
    bias = _check_bias(bias, weights.Shape[3])
    
    # calc convolution
    data = _conv2d(input.Array, weights.Array, bias, stride, padding)
    
    return Tensor(data.astype(numpy.float32))


def depthwise_conv2d(input, weights, bias, stride=1, padding=SAME):
    """
    Calculates per-channel 2-D cross-correlation plus bias. Channel i of the
    output depends only on channel i of the input.
    
    Args:
        input: pyfomo.Tensor
            Input tensor (n, h, w, c).
        
        weights: pyfomo.Tensor
            Kernel tensor (kh, kw, c, 1).
        
        bias: (float,)
            Bias per channel.
        
        stride: int
            Convolution stride.
        
        padding: str
            Padding mode as pyfomo.SAME or pyfomo.VALID.
    
    Returns:
        pyfomo.Tensor
            Output tensor (n, hout, wout, c).
    """
    
    # check shapes
    if input.Shape[3] != weights.Shape[2] or weights.Shape[3] != 1:
        message = "Input channels do not match depthwise kernel! --> '%s' vs '%s'" % (input.Shape, weights.Shape)
        raise ShapeError(message)
    
    bias = _check_bias(bias, weights.Shape[2])
    
    # calc convolution
    data = _depthwise_conv2d(input.Array, weights.Array, bias, stride, padding)
    
    return Tensor(data.astype(numpy.float32))


def relu6(input):
    """
    Clamps every element into [0, 6].
    
    Args:
        input: pyfomo.Tensor
            Input tensor.
    
    Returns:
        pyfomo.Tensor
            Clamped tensor.
    """
    
    return Tensor(_relu6(input.Array))


def add(a, b):
    """
    Adds two tensors of the same shape element-wise.
    
    Args:
        a: pyfomo.Tensor
            First tensor.
        
        b: pyfomo.Tensor
            Second tensor.
    
    Returns:
        pyfomo.Tensor
            Sum tensor.
    """
    
    if a.Shape != b.Shape:
        message = "Tensors to add must have the same shape! --> '%s' vs '%s'" % (a.Shape, b.Shape)
        raise ShapeError(message)
    
    data = a.Array.astype(numpy.float64) + b.Array
    
    return Tensor(data.astype(numpy.float32))


def softmax_per_cell(logits):
    """
    Converts per-cell logits into per-cell class probabilities.
    
    Args:
        logits: pyfomo.Tensor
            Logits tensor (1, gh, gw, k) with k >= 2.
    
    Returns:
        pyfomo.Tensor
            Probabilities tensor (1, gh, gw, k).
    """
    
    if logits.Shape[3] < 2:
        message = "Softmax needs background and at least one class! --> '%s'" % (logits.Shape,)
        raise ShapeError(message)
    
    return Tensor(_softmax(logits.Array).astype(numpy.float32))


def _check_bias(bias, channels):
    """Converts bias into array and checks its length."""
    
    bias = numpy.asarray(bias, dtype=numpy.float64).reshape(-1)
    if bias.size != channels:
        message = "Bias length does not match output channels! --> '%d' vs '%d'" % (bias.size, channels)
        raise ShapeError(message)
    
    return bias


def _pad_amounts(size, kernel, stride, padding):
    """Gets output size and leading/trailing padding for one axis."""
    
    # check params
    if padding not in PADDING:
        message = "Padding must be one of the %s! --> '%s'" % (str(PADDING), padding)
        raise ConfigError(message)
    
    if int(stride) != stride or stride < 1:
        message = "Stride must be a positive integer! --> '%s'" % stride
        raise ConfigError(message)
    
    # same padding
    if padding == SAME:
        out = -(-size // stride)
        total = max((out - 1) * stride + kernel - size, 0)
        return out, total // 2, total - total // 2
    
    # valid padding
    out = (size - kernel) // stride + 1
    if out < 1:
        message = "Kernel is larger than input! --> '%d' vs '%d'" % (kernel, size)
        raise ShapeError(message)
    
    return out, 0, 0


def _pad(x, kh, kw, stride, padding):
    """Pads input array with zeros and gets output dimensions."""
    
    oh, top, bottom = _pad_amounts(x.shape[1], kh, stride, padding)
    ow, left, right = _pad_amounts(x.shape[2], kw, stride, padding)
    
    if top or bottom or left or right:
        x = numpy.pad(x, ((0, 0), (top, bottom), (left, right), (0, 0)))
    
    return x, oh, ow


def _taps(xp, kh, kw, stride, oh, ow):
    """Iterates over kernel taps and corresponding strided input windows."""
    
    for i in range(kh):
        for j in range(kw):
            yield i, j, xp[:, i:i + stride*(oh-1) + 1:stride, j:j + stride*(ow-1) + 1:stride, :]


def _conv2d(x, w, b, stride, padding, dtype=numpy.float64):
    """Calculates convolution on plain arrays using direct tap loops."""
    
    kh, kw, cin, cout = w.shape
    
    # pad input
    xp, oh, ow = _pad(x.astype(dtype, copy=False), kh, kw, stride, padding)
    w = w.astype(dtype, copy=False)
    
    # accumulate taps
    out = numpy.zeros((x.shape[0], oh, ow, cout), dtype=dtype)
    for i, j, patch in _taps(xp, kh, kw, stride, oh, ow):
        out += numpy.tensordot(patch, w[i, j], axes=([3], [0]))
    
    # add bias
    if b is not None:
        out += numpy.asarray(b, dtype=dtype)
    
    return out


def _depthwise_conv2d(x, w, b, stride, padding, dtype=numpy.float64):
    """Calculates depthwise convolution on plain arrays using direct tap loops."""
    
    kh, kw, c, _ = w.shape
    
    # pad input
    xp, oh, ow = _pad(x.astype(dtype, copy=False), kh, kw, stride, padding)
    w = w.astype(dtype, copy=False)
    
    # accumulate taps
    out = numpy.zeros((x.shape[0], oh, ow, c), dtype=dtype)
    for i, j, patch in _taps(xp, kh, kw, stride, oh, ow):
        out += patch * w[i, j, :, 0]
    
    # add bias
    if b is not None:
        out += numpy.asarray(b, dtype=dtype)
    
    return out


def _relu6(x):
    """Clamps array into [0, 6]."""
    
    return numpy.clip(x, 0, 6)


def _softmax(logits):
    """Calculates softmax along the last axis in float64."""
    
    z = logits.astype(numpy.float64)
    z = z - z.max(axis=-1, keepdims=True)
    e = numpy.exp(z)
    
    return e / e.sum(axis=-1, keepdims=True)


def _log_softmax(logits):
    """Calculates log-softmax along the last axis in float64."""
    
    z = logits.astype(numpy.float64)
    z = z - z.max(axis=-1, keepdims=True)
    
    return z - numpy.log(numpy.exp(z).sum(axis=-1, keepdims=True))
