# import modules
import numpy
from ..enums import *
from ..lockable import Lockable
from ..errors import ShapeError, ConfigError
from ..tensor import QuantTensor, QuantParams
from ..tensor import output_size, conv2d_int8, depthwise_conv2d_int8, relu6_int8, add_int8
from ..tensor.kernels import _conv2d, _depthwise_conv2d, _relu6

# init main repository
LAYERS = {}


def register(kind):
    """Registers layer class by given kind."""
    
    def reg(cls):
        """Registers given class."""
        
        cls.KIND = kind
        LAYERS[kind] = cls
        
        return cls
    
    return reg


def create_layer(kind, **kwargs):
    """
    Creates layer record of given kind.
    
    Args:
        kind: str
            Layer kind as one of the pyfomo.LAYER_KIND.
        
        **kwargs: {str: ?}
            Layer arguments.
    
    Returns:
        pyfomo.model.Layer
            Layer record.
    """
    
    if kind not in LAYERS:
        message = "Unknown layer kind! --> '%s'" % kind
        raise ConfigError(message)
    
    return LAYERS[kind](**kwargs)


class Layer(Lockable):
    """
    The pyfomo.model.Layer class provides a base for all layer records of the
    FOMO graph. Each record holds its own weights and, for quantized models,
    the int8 weights, 32-bit bias and quantization parameters. Layers consume
    the output of the previous layer; residual additions also consume the
    output of the layer named by 'Skip'.
    
    You can create other layer kinds by deriving from this class and
    registering them by 'pyfomo.model.register' decorator.
    
    Attributes:
        
        Kind: str
            Layer kind.
        
        Name: str
            Unique layer name.
        
        Weights: numpy.ndarray or None
            Kernel as float32 or int8 array.
        
        Bias: numpy.ndarray or None
            Bias as float32 or int32 array.
        
        Stride: int
            Spatial stride.
        
        Padding: str
            Padding mode.
        
        Skip: str or None
            Name of the tensor added by residual layers.
        
        WeightParams: pyfomo.QuantParams or None
            Weights quantization.
        
        OutputParams: pyfomo.QuantParams or None
            Output activation quantization.
    """
    
    KIND = None
    
    
    def __init__(self, name, weights=None, bias=None, stride=1, padding=SAME, skip=None, weight_params=None, output_params=None):
        """
        Initializes a new instance of Layer.
        
        Args:
            name: str
                Unique layer name.
            
            weights: numpy.ndarray or None
                Kernel (kh, kw, cin, cout) as float32 or int8.
            
            bias: numpy.ndarray or None
                Bias as float32 or int32.
            
            stride: int
                Spatial stride.
            
            padding: str
                Padding mode.
            
            skip: str or None
                Name of the tensor added by residual layers.
            
            weight_params: pyfomo.QuantParams or None
                Weights quantization.
            
            output_params: pyfomo.QuantParams or None
                Output activation quantization.
        """
        
        super().__init__()
        
        # check name
        if not name:
            message = "Layer name must be specified!"
            raise ConfigError(message)
        
        # init attributes
        self.Name = name
        self.Stride = int(stride)
        self.Padding = padding
        self.Skip = skip
        self.WeightParams = weight_params
        self.OutputParams = output_params
        
        # init weights
        self.Weights = None
        self.Bias = None
        
        if weights is not None:
            dtype = numpy.int8 if weight_params is not None else numpy.float32
            self.Weights = numpy.array(weights, dtype=dtype)
        
        if bias is not None:
            dtype = numpy.int32 if weight_params is not None else numpy.float32
            self.Bias = numpy.array(bias, dtype=dtype)
        
        # check weights
        self._check()
        
        # lock
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "%s(%s)" % (self.__class__.__name__, self.Name)
    
    
    @property
    def Kind(self):
        """Gets layer kind."""
        
        return self.KIND
    
    
    @property
    def IsQuantized(self):
        """Checks whether layer holds int8 data."""
        
        return self.OutputParams is not None
    
    
    @property
    def ParameterCount(self):
        """Gets number of real parameters."""
        
        count = 0
        if self.Weights is not None:
            count += self.Weights.size
        if self.Bias is not None:
            count += self.Bias.size
        
        return int(count)
    
    
    @property
    def WeightBytes(self):
        """Gets number of bytes occupied by weights and bias."""
        
        count = 0
        if self.Weights is not None:
            count += self.Weights.nbytes
        if self.Bias is not None:
            count += self.Bias.nbytes
        
        return int(count)
    
    
    def Replace(self, **kwargs):
        """
        Creates a copy of current layer with some attributes replaced.
        
        Args:
            **kwargs: {str: ?}
                Attributes to replace, named as in __init__.
        
        Returns:
            pyfomo.model.Layer
                New layer record.
        """
        
        args = {
            'name': self.Name,
            'weights': self.Weights,
            'bias': self.Bias,
            'stride': self.Stride,
            'padding': self.Padding,
            'skip': self.Skip,
            'weight_params': self.WeightParams,
            'output_params': self.OutputParams}
        
        args.update(kwargs)
        
        return self.__class__(**args)
    
    
    def OutputShape(self, input_shape):
        """
        Gets output shape for given input shape.
        
        Args:
            input_shape: (int, int, int, int)
                Input dimensions.
        
        Returns:
            (int, int, int, int)
                Output dimensions.
        """
        
        return tuple(input_shape)
    
    
    def Macs(self, input_shape):
        """
        Gets number of multiply-accumulate operations for given input shape.
        
        Args:
            input_shape: (int, int, int, int)
                Input dimensions.
        
        Returns:
            int
                Number of MACs per image.
        """
        
        return 0
    
    
    def Run(self, x, skip=None):
        """
        Runs real-valued layer.
        
        Args:
            x: numpy.ndarray
                Input activations.
            
            skip: numpy.ndarray or None
                Skip source activations for residual layers.
        
        Returns:
            numpy.ndarray
                Output activations as float32.
        """
        
        raise NotImplementedError()
    
    
    def RunInt8(self, x, skip=None):
        """
        Runs quantized layer.
        
        Args:
            x: pyfomo.QuantTensor
                Input activations.
            
            skip: pyfomo.QuantTensor or None
                Skip source activations for residual layers.
        
        Returns:
            pyfomo.QuantTensor
                Output activations.
        """
        
        raise NotImplementedError()
    
    
    def ToJSON(self):
        """Converts layer description (without weights) to JSON-like object."""
        
        data = {
            'kind': self.Kind,
            'name': self.Name,
            'stride': self.Stride,
            'padding': self.Padding,
            'skip': self.Skip,
            'weight_params': self.WeightParams.ToJSON() if self.WeightParams else None,
            'output_params': self.OutputParams.ToJSON() if self.OutputParams else None}
        
        return data
    
    
    def _check(self):
        """Checks weights consistency."""
        
        pass


@register(CONV)
class ConvLayer(Layer):
    """Standard convolution, kernel (kh, kw, cin, cout)."""
    
    
    def _check(self):
        """Checks weights consistency."""
        
        if self.Weights is None or self.Weights.ndim != 4:
            message = "Convolution needs 4-D kernel! --> '%s'" % self.Name
            raise ShapeError(message)
        
        if self.Bias is None or self.Bias.shape != (self.Weights.shape[3],):
            message = "Bias does not match kernel output channels! --> '%s'" % self.Name
            raise ShapeError(message)
    
    
    def OutputShape(self, input_shape):
        """Gets output shape for given input shape."""
        
        n, h, w, c = input_shape
        kh, kw, cin, cout = self.Weights.shape
        
        if c != cin:
            message = "Input channels do not match kernel! --> '%s' vs '%s' in '%s'" % (input_shape, self.Weights.shape, self.Name)
            raise ShapeError(message)
        
        return (n, output_size(h, kh, self.Stride, self.Padding), output_size(w, kw, self.Stride, self.Padding), cout)
    
    
    def Macs(self, input_shape):
        """Gets number of MACs per image."""
        
        _, ho, wo, _ = self.OutputShape(input_shape)
        kh, kw, cin, cout = self.Weights.shape
        
        return kh * kw * cin * cout * ho * wo
    
    
    def Run(self, x, skip=None):
        """Runs real-valued layer."""
        
        return _conv2d(x, self.Weights, self.Bias, self.Stride, self.Padding).astype(numpy.float32)
    
    
    def RunInt8(self, x, skip=None):
        """Runs quantized layer."""
        
        weights = QuantTensor(self.Weights, self.WeightParams)
        return conv2d_int8(x, weights, self.Bias, self.OutputParams, self.Stride, self.Padding)


@register(POINTWISE)
class PointwiseLayer(ConvLayer):
    """1x1 convolution used for channel expansion and projection."""
    
    
    def _check(self):
        """Checks weights consistency."""
        
        super()._check()
        
        if self.Weights.shape[:2] != (1, 1):
            message = "Pointwise layer needs 1x1 kernel! --> '%s'" % self.Name
            raise ShapeError(message)


@register(HEAD)
class HeadLayer(PointwiseLayer):
    """1x1 classification head emitting per-cell logits, background first."""
    pass


@register(DEPTHWISE)
class DepthwiseLayer(Layer):
    """Depthwise convolution, kernel (kh, kw, c, 1)."""
    
    
    def _check(self):
        """Checks weights consistency."""
        
        if self.Weights is None or self.Weights.ndim != 4 or self.Weights.shape[3] != 1:
            message = "Depthwise convolution needs (kh, kw, c, 1) kernel! --> '%s'" % self.Name
            raise ShapeError(message)
        
        if self.Bias is None or self.Bias.shape != (self.Weights.shape[2],):
            message = "Bias does not match kernel channels! --> '%s'" % self.Name
            raise ShapeError(message)
    
    
    def OutputShape(self, input_shape):
        """Gets output shape for given input shape."""
        
        n, h, w, c = input_shape
        kh, kw, cin, _ = self.Weights.shape
        
        if c != cin:
            message = "Input channels do not match kernel! --> '%s' vs '%s' in '%s'" % (input_shape, self.Weights.shape, self.Name)
            raise ShapeError(message)
        
        return (n, output_size(h, kh, self.Stride, self.Padding), output_size(w, kw, self.Stride, self.Padding), c)
    
    
    def Macs(self, input_shape):
        """Gets number of MACs per image."""
        
        _, ho, wo, c = self.OutputShape(input_shape)
        kh, kw, _, _ = self.Weights.shape
        
        return kh * kw * c * ho * wo
    
    
    def Run(self, x, skip=None):
        """Runs real-valued layer."""
        
        return _depthwise_conv2d(x, self.Weights, self.Bias, self.Stride, self.Padding).astype(numpy.float32)
    
    
    def RunInt8(self, x, skip=None):
        """Runs quantized layer."""
        
        weights = QuantTensor(self.Weights, self.WeightParams)
        return depthwise_conv2d_int8(x, weights, self.Bias, self.OutputParams, self.Stride, self.Padding)


@register(RELU6)
class Relu6Layer(Layer):
    """Activation clamping values into [0, 6]."""
    
    
    def Run(self, x, skip=None):
        """Runs real-valued layer."""
        
        return _relu6(x).astype(numpy.float32)
    
    
    def RunInt8(self, x, skip=None):
        """Runs quantized layer."""
        
        return relu6_int8(x, self.OutputParams)


@register(RESIDUAL_ADD)
class ResidualAddLayer(Layer):
    """Adds the output of the 'Skip' layer to its input."""
    
    
    def _check(self):
        """Checks skip source."""
        
        if not self.Skip:
            message = "Residual layer needs skip source! --> '%s'" % self.Name
            raise ConfigError(message)
    
    
    def Run(self, x, skip=None):
        """Runs real-valued layer."""
        
        return (x.astype(numpy.float64) + skip).astype(numpy.float32)
    
    
    def RunInt8(self, x, skip=None):
        """Runs quantized layer."""
        
        return add_int8(x, skip, self.OutputParams)
