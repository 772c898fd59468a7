# import modules
import logging
import numpy
from ..enums import *
from ..errors import ConfigError, CalibrationError, AccumulatorOverflowError
from ..tensor import Tensor, QuantTensor, QuantParams, QMIN, QMAX
from ..tensor import round_half_away, quantize_values
from ..tensor.qkernels import INT32_LIMIT

# init logger
logger = logging.getLogger(__name__)


def symmetric_params(values):
    """
    Gets symmetric parameters mapping max |v| to 127 and zero to zero.
    
    Args:
        values: numpy.ndarray
            Real values.
    
    Returns:
        pyfomo.QuantParams
            Quantization parameters.
    """
    
    values = numpy.asarray(values, dtype=numpy.float64)
    peak = float(numpy.max(numpy.abs(values))) if values.size else 0.0
    
    if peak == 0:
        return QuantParams(1.0, 0)
    
    return QuantParams(peak / QMAX, 0)


def asymmetric_params(lo, hi):
    """
    Gets asymmetric parameters spreading [lo, hi] extended to zero over
    all 256 levels, lo mapping near -128.
    
    Args:
        lo: float
            Range minimum.
        
        hi: float
            Range maximum.
    
    Returns:
        pyfomo.QuantParams
            Quantization parameters.
    """
    
    lo = min(float(lo), 0.0)
    hi = max(float(hi), 0.0)
    
    if hi == lo:
        return QuantParams(1.0, 0)
    
    scale = (hi - lo) / (QMAX - QMIN)
    zero_point = int(round_half_away(QMIN - lo / scale))
    
    return QuantParams(scale, min(max(zero_point, QMIN), QMAX))


def quantize_tensor(values, symmetric):
    """
    Quantizes tensor with parameters derived from its own values. Symmetric
    mode is used for weights, asymmetric mode for activations.
    
    Args:
        values: pyfomo.Tensor or numpy.ndarray
            Real 4-D values.
        
        symmetric: bool
            If set to True, zero point is 0 and scale is max|v| / 127.
    
    Returns:
        pyfomo.QuantTensor
            Quantized tensor.
    """
    
    data = values.Array if isinstance(values, Tensor) else numpy.asarray(values, dtype=numpy.float64)
    
    if not numpy.all(numpy.isfinite(data)):
        message = "Values to quantize must be finite!"
        raise ValueError(message)
    
    if symmetric:
        params = symmetric_params(data)
    else:
        params = asymmetric_params(data.min() if data.size else 0.0, data.max() if data.size else 0.0)
    
    return QuantTensor(quantize_values(data, params), params)


def dequantize(qtensor):
    """
    Converts quantized tensor into real values.
    
    Args:
        qtensor: pyfomo.QuantTensor
            Quantized tensor.
    
    Returns:
        pyfomo.Tensor
            Real values.
    """
    
    return Tensor(qtensor.Dequantize())


def quantize_model(model, stats):
    """
    Converts real-valued model into int8 model. Weights are quantized
    symmetrically per tensor, activations asymmetrically from calibration
    ranges and biases into 32-bit integers at input_scale * weight_scale.
    
    Args:
        model: pyfomo.FomoModel
            Real-valued model.
        
        stats: pyfomo.CalibrationStats
            Ranges of every activation tensor.
    
    Returns:
        pyfomo.FomoModel
            Quantized model.
    """
    
    if model.IsQuantized:
        message = "Model is already quantized!"
        raise ConfigError(message)
    
    # get activation params
    params = {}
    for name in [INPUT_TENSOR] + [l.Name for l in model.Layers]:
        
        if name not in stats:
            message = "Calibration stats do not cover tensor! --> '%s'" % name
            raise CalibrationError(message)
        
        params[name] = asymmetric_params(*stats.Ranges[name])
    
    # quantize layers
    layers = []
    previous = INPUT_TENSOR
    
    for layer in model.Layers:
        
        in_params = params[previous]
        out_params = params[layer.Name]
        previous = layer.Name
        
        if layer.Weights is None:
            layers.append(layer.Replace(output_params=out_params))
            continue
        
        # quantize weights
        weight_params = symmetric_params(layer.Weights)
        weights = quantize_values(layer.Weights, weight_params)
        
        # quantize bias
        bias = round_half_away(layer.Bias.astype(numpy.float64) / (in_params.Scale * weight_params.Scale))
        if bias.size and numpy.max(numpy.abs(bias)) > INT32_LIMIT:
            message = "Quantized bias does not fit 32-bit integer! --> '%s'" % layer.Name
            raise AccumulatorOverflowError(message)
        
        layers.append(layer.Replace(
            weights = weights,
            bias = bias.astype(numpy.int32),
            weight_params = weight_params,
            output_params = out_params))
    
    quantized = model.Replace(layers=layers, format_tag=INT8, input_params=params[INPUT_TENSOR])
    
    logger.info("quantized %d layers, weights %d -> %d bytes", len(layers), model.WeightBytes, quantized.WeightBytes)
    
    return quantized
