# import modules
import numpy
from ..enums import *
from ..errors import ShapeError, AccumulatorOverflowError
from .quant_tensor import QuantTensor, QMIN, QMAX
from .kernels import _conv2d, _depthwise_conv2d

# define accumulator limits
INT32_LIMIT = 2**31 - 1
FLOAT32_EXACT_LIMIT = 2**24


def round_half_away(values):
    """
    Rounds values to nearest integer, halves away from zero.
    
    Args:
        values: numpy.ndarray or float
            Values to round.
    
    Returns:
        numpy.ndarray or float
            Rounded values.
    """
    
    return numpy.sign(values) * numpy.floor(numpy.abs(values) + 0.5)


def requantize(acc, multiplier, zero_point, lo=QMIN, hi=QMAX):
    """
    Maps integer accumulator values to int8 output.
    
    Args:
        acc: numpy.ndarray
            Accumulator values at input_scale * weight_scale.
        
        multiplier: float
            Ratio of accumulator scale and output scale.
        
        zero_point: int
            Output zero point.
        
        lo: int
            Lowest allowed output value.
        
        hi: int
            Highest allowed output value.
    
    Returns:
        numpy.ndarray
            Requantized int8 values.
    """
    
    q = round_half_away(numpy.asarray(acc, dtype=numpy.float64) * multiplier) + zero_point
    
    return numpy.clip(q, lo, hi).astype(numpy.int8)


def quantize_values(values, params):
    """
    Maps real values to int8 using given parameters. Values outside the
    representable range are clipped.
    
    Args:
        values: numpy.ndarray
            Real values.
    
        params: pyfomo.QuantParams
            Quantization parameters.
    
    Returns:
        numpy.ndarray
            Quantized int8 values.
    """
    
    q = round_half_away(numpy.asarray(values, dtype=numpy.float64) / params.Scale) + params.ZeroPoint
    
    return numpy.clip(q, QMIN, QMAX).astype(numpy.int8)


def accumulator_bound(kh, kw, cin, input_params, weight_params, bias32):
    """
    Gets the largest accumulator magnitude reachable for given layer shape.
    
    Args:
        kh: int
            Kernel height.
        
        kw: int
            Kernel width.
        
        cin: int
            Number of input channels per output element.
        
        input_params: pyfomo.QuantParams
            Input quantization.
        
        weight_params: pyfomo.QuantParams
            Weights quantization.
        
        bias32: numpy.ndarray
            Integer bias.
    
    Returns:
        int
            Accumulator bound.
    """
    
    in_mag = max(QMAX - input_params.ZeroPoint, input_params.ZeroPoint - QMIN)
    w_mag = max(QMAX - weight_params.ZeroPoint, weight_params.ZeroPoint - QMIN)
    bias_mag = int(numpy.max(numpy.abs(bias32))) if len(bias32) else 0
    
    return kh * kw * cin * in_mag * w_mag + bias_mag


def conv2d_int8(input, weights, bias32, out_params, stride=1, padding=SAME):
    """
    Calculates int8 convolution with 32-bit accumulation and requantization.
    Padding uses the input zero point.
    
    Args:
        input: pyfomo.QuantTensor
            Quantized input (n, h, w, cin).
        
        weights: pyfomo.QuantTensor
            Quantized kernel (kh, kw, cin, cout).
        
        bias32: (int,)
            Integer bias at scale input_scale * weight_scale.
        
        out_params: pyfomo.QuantParams
            Output quantization.
        
        stride: int
            Convolution stride.
        
        padding: str
            Padding mode as pyfomo.SAME or pyfomo.VALID.
    
    Returns:
        pyfomo.QuantTensor
            Quantized output.
    """
    
    kh, kw, cin, cout = weights.Shape
    
    # check shapes
    if input.Shape[3] != cin:
        message = "Input channels do not match kernel! --> '%s' vs '%s'" % (input.Shape, weights.Shape)
        raise ShapeError(message)
    
    bias32 = _check_bias32(bias32, cout)
    
    # get accumulator type
    bound = accumulator_bound(kh, kw, cin, input.Params, weights.Params, bias32)
    dtype = _accumulator_dtype(bound)
    
    # accumulate centered values
    x = input.Array.astype(dtype) - input.ZeroPoint
    w = weights.Array.astype(dtype) - weights.ZeroPoint
    acc = _conv2d(x, w, bias32.astype(dtype), stride, padding, dtype=dtype)
    
    # requantize
    multiplier = input.Scale * weights.Scale / out_params.Scale
    data = requantize(acc, multiplier, out_params.ZeroPoint)
    
    return QuantTensor(data, out_params)


def depthwise_conv2d_int8(input, weights, bias32, out_params, stride=1, padding=SAME):
    """
    Calculates int8 depthwise convolution with 32-bit accumulation.
    
    Args:
        input: pyfomo.QuantTensor
            Quantized input (n, h, w, c).
        
        weights: pyfomo.QuantTensor
            Quantized kernel (kh, kw, c, 1).
        
        bias32: (int,)
            Integer bias at scale input_scale * weight_scale.
        
        out_params: pyfomo.QuantParams
            Output quantization.
        
        stride: int
            Convolution stride.
        
        padding: str
            Padding mode as pyfomo.SAME or pyfomo.VALID.
    
    Returns:
        pyfomo.QuantTensor
            Quantized output.
    """
    
    kh, kw, c, _ = weights.Shape
    
    # check shapes
    if input.Shape[3] != c:
        message = "Input channels do not match depthwise kernel! --> '%s' vs '%s'" % (input.Shape, weights.Shape)
        raise ShapeError(message)
    
    bias32 = _check_bias32(bias32, c)
    
    # get accumulator type
    bound = accumulator_bound(kh, kw, 1, input.Params, weights.Params, bias32)
    dtype = _accumulator_dtype(bound)
    
    # accumulate centered values
    x = input.Array.astype(dtype) - input.ZeroPoint
    w = weights.Array.astype(dtype) - weights.ZeroPoint
    acc = _depthwise_conv2d(x, w, bias32.astype(dtype), stride, padding, dtype=dtype)
    
    # requantize
    multiplier = input.Scale * weights.Scale / out_params.Scale
    data = requantize(acc, multiplier, out_params.ZeroPoint)
    
    return QuantTensor(data, out_params)


def relu6_int8(input, out_params):
    """
    Clamps quantized values into real [0, 6] and maps them to output params.
    
    Args:
        input: pyfomo.QuantTensor
            Quantized input.
        
        out_params: pyfomo.QuantParams
            Output quantization.
    
    Returns:
        pyfomo.QuantTensor
            Quantized output.
    """
    
    # get clamp limits in output units
    lo = max(QMIN, out_params.ZeroPoint)
    hi = min(QMAX, out_params.ZeroPoint + int(round_half_away(6.0 / out_params.Scale)))
    
    # rescale
    x = input.Array.astype(numpy.int32) - input.ZeroPoint
    data = requantize(x, input.Scale / out_params.Scale, out_params.ZeroPoint, lo, hi)
    
    return QuantTensor(data, out_params)


def add_int8(a, b, out_params):
    """
    Adds two quantized tensors of the same shape.
    
    Args:
        a: pyfomo.QuantTensor
            First tensor.
        
        b: pyfomo.QuantTensor
            Second tensor.
        
        out_params: pyfomo.QuantParams
            Output quantization.
    
    Returns:
        pyfomo.QuantTensor
            Quantized sum.
    """
    
    if a.Shape != b.Shape:
        message = "Tensors to add must have the same shape! --> '%s' vs '%s'" % (a.Shape, b.Shape)
        raise ShapeError(message)
    
    # rescale both operands to output scale
    xa = (a.Array.astype(numpy.float64) - a.ZeroPoint) * (a.Scale / out_params.Scale)
    xb = (b.Array.astype(numpy.float64) - b.ZeroPoint) * (b.Scale / out_params.Scale)
    
    data = requantize(xa + xb, 1.0, out_params.ZeroPoint)
    
    return QuantTensor(data, out_params)


def _check_bias32(bias32, channels):
    """Converts integer bias into array and checks its length."""
    
    bias32 = numpy.asarray(bias32, dtype=numpy.int64).reshape(-1)
    if bias32.size != channels:
        message = "Bias length does not match output channels! --> '%d' vs '%d'" % (bias32.size, channels)
        raise ShapeError(message)
    
    if bias32.size and numpy.max(numpy.abs(bias32)) > INT32_LIMIT:
        message = "Bias does not fit 32-bit integer!"
        raise AccumulatorOverflowError(message)
    
    return bias32


def _accumulator_dtype(bound):
    """
    Gets host type emulating the 32-bit accumulator exactly. Integer sums
    below 2**24 are exact in float32, below 2**53 in float64.
    """
    
    if bound > INT32_LIMIT:
        message = "Layer accumulator could overflow 32 bits! --> '%d'" % bound
        raise AccumulatorOverflowError(message)
    
    if bound < FLOAT32_EXACT_LIMIT:
        return numpy.float32
    
    return numpy.float64
