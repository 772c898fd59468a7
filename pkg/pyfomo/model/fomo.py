# import modules
import numpy
from ..enums import *
from ..lockable import Lockable
from ..errors import ShapeError, ConfigError
from ..tensor import Tensor, QuantTensor, quantize_values
from ..tensor.kernels import _softmax
from .config import ModelConfig
from .layers import create_layer

# define backbone
STEM_CHANNELS = 32
BLOCKS = ((24, 2), (32, 2), (32, 1))
EXPANSION = 6
KERNEL = 3


class GridHeatmap(Lockable):
    """
    Holds per-cell class probabilities produced by the FOMO model. Channel 0
    is the background.
    
    Attributes:
        
        GridH: int
            Number of cell rows.
        
        GridW: int
            Number of cell columns.
        
        Probs: pyfomo.Tensor
            Probabilities tensor (1, grid_h, grid_w, num_classes+1).
    """
    
    
    def __init__(self, probs):
        """
        Initializes a new instance of GridHeatmap.
        
        Args:
            probs: pyfomo.Tensor or numpy.ndarray
                Probabilities tensor (1, grid_h, grid_w, k).
        """
        
        super().__init__()
        
        if not isinstance(probs, Tensor):
            probs = Tensor(probs)
        
        # check shape
        if probs.Shape[0] != 1 or probs.Shape[3] < 2:
            message = "Heatmap must be (1, gh, gw, k) with k >= 2! --> '%s'" % (probs.Shape,)
            raise ShapeError(message)
        
        self.Probs = probs
        
        # lock
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "GridHeatmap(%dx%d, %d classes)" % (self.GridH, self.GridW, self.NumClasses)
    
    
    @property
    def GridH(self):
        """Gets number of cell rows."""
        
        return self.Probs.Shape[1]
    
    
    @property
    def GridW(self):
        """Gets number of cell columns."""
        
        return self.Probs.Shape[2]
    
    
    @property
    def NumClasses(self):
        """Gets number of foreground classes."""
        
        return self.Probs.Shape[3] - 1
    
    
    @property
    def Array(self):
        """Gets probabilities as (grid_h, grid_w, k) array."""
        
        return self.Probs.Array[0]


class FomoModel(Lockable):
    """
    The pyfomo.FomoModel class holds the ordered layer graph of the FOMO
    detector, i.e. the truncated backbone followed by the 1x1 classification
    head. The model is either real-valued (pyfomo.F32) or quantized
    (pyfomo.INT8), in which case every layer carries its output quantization
    and the model carries the quantization of its input.
    
    The layers are validated at construction so that consecutive shapes are
    chain-compatible, the total downsampling is exactly the cell size and the
    head emits one channel per class plus background.
    
    Attributes:
        
        Config: pyfomo.ModelConfig
            Model configuration.
        
        Layers: (pyfomo.model.Layer,)
            Ordered layer records.
        
        FormatTag: str
            Model format as pyfomo.F32 or pyfomo.INT8.
        
        InputParams: pyfomo.QuantParams or None
            Input quantization for int8 models.
    """
    
    
    def __init__(self, config, layers, format_tag=F32, input_params=None):
        """
        Initializes a new instance of FomoModel.
        
        Args:
            config: pyfomo.ModelConfig
                Model configuration.
            
            layers: (pyfomo.model.Layer,)
                Ordered layer records.
            
            format_tag: str
                Model format as pyfomo.F32 or pyfomo.INT8.
            
            input_params: pyfomo.QuantParams or None
                Input quantization for int8 models.
        """
        
        super().__init__()
        
        # check format
        if format_tag not in MODEL_FORMAT:
            message = "Model format must be one of the %s! --> '%s'" % (str(MODEL_FORMAT), format_tag)
            raise ConfigError(message)
        
        self.Config = config
        self.Layers = tuple(layers)
        self.FormatTag = format_tag
        self.InputParams = input_params
        
        # check graph
        self._shapes = self._check_graph()
        
        # lock
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "FomoModel(%d, %d classes, %s, %d layers)" % (self.Config.InputSize, self.Config.NumClasses, self.FormatTag, len(self.Layers))
    
    
    @property
    def IsQuantized(self):
        """Checks whether model is int8."""
        
        return self.FormatTag == INT8
    
    
    @property
    def InputShape(self):
        """Gets single image input shape."""
        
        size = self.Config.InputSize
        return (1, size, size, 3)
    
    
    @property
    def OutputShapes(self):
        """
        Gets output shape of every layer for single image input.
        
        Returns:
            {str: (int, int, int, int)}
                Output shapes by layer name.
        """
        
        return dict(self._shapes)
    
    
    @property
    def ParameterCount(self):
        """Gets number of real parameters."""
        
        return sum(x.ParameterCount for x in self.Layers)
    
    
    @property
    def WeightBytes(self):
        """Gets number of bytes occupied by weights and biases."""
        
        return sum(x.WeightBytes for x in self.Layers)
    
    
    def GetLayer(self, name):
        """
        Gets layer by its name.
        
        Args:
            name: str
                Layer name.
        
        Returns:
            pyfomo.model.Layer
                Requested layer.
        """
        
        for layer in self.Layers:
            if layer.Name == name:
                return layer
        
        message = "Unknown layer! --> '%s'" % name
        raise KeyError(message)
    
    
    def Replace(self, layers=None, format_tag=None, input_params=None):
        """
        Creates a copy of current model with some parts replaced.
        
        Args:
            layers: (pyfomo.model.Layer,) or None
                New layer records.
            
            format_tag: str or None
                New model format.
            
            input_params: pyfomo.QuantParams or None
                New input quantization.
        
        Returns:
            pyfomo.FomoModel
                New model.
        """
        
        return FomoModel(
            config = self.Config,
            layers = layers if layers is not None else self.Layers,
            format_tag = format_tag or self.FormatTag,
            input_params = input_params if input_params is not None else self.InputParams)
    
    
    def Forward(self, image):
        """
        Runs the model on single image.
        
        Args:
            image: pyfomo.Tensor
                Image tensor (1, s, s, 3) with values in [0, 1].
        
        Returns:
            pyfomo.GridHeatmap
                Per-cell class probabilities.
        """
        
        data = image.Array if isinstance(image, Tensor) else numpy.asarray(image)
        
        if data.shape[0] != 1:
            message = "Forward expects single image! --> '%s'" % (data.shape,)
            raise ShapeError(message)
        
        probs = self.ForwardBatch(data)
        
        return GridHeatmap(probs)
    
    
    def ForwardBatch(self, images):
        """
        Runs the model on a batch of images.
        
        Args:
            images: numpy.ndarray
                Images array (n, s, s, 3) with values in [0, 1].
        
        Returns:
            numpy.ndarray
                Probabilities array (n, gh, gw, k) as float32.
        """
        
        logits = self.Logits(images)
        
        return _softmax(logits).astype(numpy.float32)
    
    
    def Logits(self, images):
        """
        Runs the model on a batch of images and gets raw head output.
        
        Args:
            images: numpy.ndarray
                Images array (n, s, s, 3) with values in [0, 1].
        
        Returns:
            numpy.ndarray
                Logits array (n, gh, gw, k) as float64.
        """
        
        trace = self._run(images, keep=False)
        head = self.Layers[-1].Name
        
        if self.IsQuantized:
            return trace[head].Dequantize()
        
        return trace[head].astype(numpy.float64)
    
    
    def Trace(self, images):
        """
        Runs the model and keeps every intermediate activation. For int8 models
        the activations are dequantized.
        
        Args:
            images: numpy.ndarray or pyfomo.Tensor
                Images array (n, s, s, 3) with values in [0, 1].
        
        Returns:
            {str: numpy.ndarray}
                Activations by tensor name including pyfomo.INPUT_TENSOR.
        """
        
        trace = self._run(images, keep=True)
        
        if self.IsQuantized:
            return {k: v.Dequantize() for k, v in trace.items()}
        
        return trace
    
    
    def _run(self, images, keep):
        """Runs layers and gets activations needed by the caller."""
        
        data = images.Array if isinstance(images, Tensor) else numpy.asarray(images)
        
        # check input
        expected = self.InputShape[1:]
        if data.ndim != 4 or data.shape[1:] != expected:
            message = "Image does not match model input! --> '%s' vs '%s'" % (data.shape[1:], expected)
            raise ShapeError(message)
        
        # init input
        if self.IsQuantized:
            x = QuantTensor(quantize_values(data, self.InputParams), self.InputParams)
        else:
            x = numpy.asarray(data, dtype=numpy.float32)
        
        # get tensors to keep
        skips = set(l.Skip for l in self.Layers if l.Skip)
        
        # run layers
        trace = {INPUT_TENSOR: x}
        for layer in self.Layers:
            
            skip = trace[layer.Skip] if layer.Skip else None
            
            if self.IsQuantized:
                x = layer.RunInt8(x, skip)
            else:
                x = layer.Run(x, skip)
            
            if keep or layer.Name in skips or layer is self.Layers[-1]:
                trace[layer.Name] = x
        
        return trace
    
    
    def _check_graph(self):
        """Checks layers chain and gets output shapes."""
        
        if not self.Layers:
            message = "Model must have at least one layer!"
            raise ConfigError(message)
        
        # check quantization
        if self.IsQuantized:
            if self.InputParams is None:
                message = "Int8 model needs input quantization!"
                raise ConfigError(message)
            
            for layer in self.Layers:
                if not layer.IsQuantized:
                    message = "Int8 model layer is missing quantization! --> '%s'" % layer.Name
                    raise ConfigError(message)
        
        # follow shapes
        shape = self.InputShape
        shapes = {INPUT_TENSOR: shape}
        
        for layer in self.Layers:
            
            if layer.Name in shapes:
                message = "Duplicate layer name! --> '%s'" % layer.Name
                raise ConfigError(message)
            
            if layer.Skip:
                if layer.Skip not in shapes:
                    message = "Skip source must precede the layer! --> '%s' in '%s'" % (layer.Skip, layer.Name)
                    raise ConfigError(message)
                
                if shapes[layer.Skip] != shape:
                    message = "Skip source shape does not match! --> '%s' vs '%s' in '%s'" % (shapes[layer.Skip], shape, layer.Name)
                    raise ShapeError(message)
            
            shape = layer.OutputShape(shape)
            shapes[layer.Name] = shape
        
        # check head
        head = self.Layers[-1]
        if head.Kind != HEAD:
            message = "Last layer must be the classification head! --> '%s'" % head.Name
            raise ConfigError(message)
        
        if shape[3] != self.Config.NumClasses + 1:
            message = "Head must emit one channel per class plus background! --> '%d' vs '%d'" % (shape[3], self.Config.NumClasses + 1)
            raise ShapeError(message)
        
        # check downsampling
        grid = self.Config.GridSize
        if shape[1:3] != (grid, grid):
            message = "Model must downsample input exactly %d times! --> '%s'" % (self.Config.CellSize, shape[1:3])
            raise ShapeError(message)
        
        return shapes


def make_divisible(value, divisor=8):
    """
    Rounds channel count to the nearest multiple of divisor, never going more
    than 10 percent below the original value.
    
    Args:
        value: float
            Requested channels.
        
        divisor: int
            Channel granularity.
    
    Returns:
        int
            Rounded channels.
    """
    
    rounded = max(divisor, int(value + divisor / 2) // divisor * divisor)
    if rounded < 0.9 * value:
        rounded += divisor
    
    return rounded


def backbone_plan(config):
    """
    Gets layer kinds, names and channel counts of the FOMO topology.
    
    Args:
        config: pyfomo.ModelConfig
            Model configuration.
    
    Returns:
        ((str, str, dict),)
            Layer kind, name and shape arguments (kernel, cin, cout, stride,
            skip) in execution order.
    """
    
    alpha = config.WidthMultiplier
    plan = []
    
    # stem
    channels = make_divisible(STEM_CHANNELS * alpha)
    plan.append((CONV, "stem", {'kernel': KERNEL, 'cin': 3, 'cout': channels, 'stride': 2}))
    plan.append((RELU6, "stem_relu6", {}))
    
    # inverted residual blocks
    for i, (width, stride) in enumerate(BLOCKS):
        
        name = "block%d" % (i+1)
        expanded = channels * EXPANSION
        out = make_divisible(width * alpha)
        
        plan.append((POINTWISE, name+"_expand", {'kernel': 1, 'cin': channels, 'cout': expanded, 'stride': 1}))
        plan.append((RELU6, name+"_expand_relu6", {}))
        plan.append((DEPTHWISE, name+"_dw", {'kernel': KERNEL, 'cin': expanded, 'cout': expanded, 'stride': stride}))
        plan.append((RELU6, name+"_dw_relu6", {}))
        plan.append((POINTWISE, name+"_project", {'kernel': 1, 'cin': expanded, 'cout': out, 'stride': 1}))
        
        # residual connection for shape-preserving blocks
        if stride == 1 and out == channels:
            plan.append((RESIDUAL_ADD, name+"_add", {'skip': plan[-6][1]}))
        
        channels = out
    
    # head
    plan.append((HEAD, "head", {'kernel': 1, 'cin': channels, 'cout': config.NumClasses + 1, 'stride': 1}))
    
    return tuple(plan)


def build_fomo(config, seed, zero_head=False):
    """
    Creates real-valued FOMO model with deterministic random weights.
    
    Convolutions followed by an activation use He-normal initialization,
    linear projections and the head use standard deviation sqrt(1/fan_in).
    All biases start at zero.
    
    Args:
        config: pyfomo.ModelConfig
            Model configuration.
        
        seed: int
            Random seed.
        
        zero_head: bool
            If set to True, head weights are zeroed so the model outputs
            uniform distributions.
    
    Returns:
        pyfomo.FomoModel
            Initialized model.
    """
    
    if not isinstance(config, ModelConfig):
        message = "Model configuration expected! --> '%s'" % type(config).__name__
        raise ConfigError(message)
    
    rng = numpy.random.default_rng(seed)
    layers = []
    
    for kind, name, args in backbone_plan(config):
        
        # layers without weights
        if kind == RELU6:
            layers.append(create_layer(kind, name=name))
            continue
        
        if kind == RESIDUAL_ADD:
            layers.append(create_layer(kind, name=name, skip=args['skip']))
            continue
        
        # init kernel
        k, cin, cout = args['kernel'], args['cin'], args['cout']
        if kind == DEPTHWISE:
            shape = (k, k, cin, 1)
            fan_in = k * k
        else:
            shape = (k, k, cin, cout)
            fan_in = k * k * cin
        
        gain = 1.0 if kind in (HEAD,) or name.endswith("_project") else 2.0
        weights = rng.normal(0.0, numpy.sqrt(gain / fan_in), size=shape)
        bias = numpy.zeros(shape[3] if kind != DEPTHWISE else cin)
        
        if kind == HEAD and zero_head:
            weights = numpy.zeros(shape)
        
        layers.append(create_layer(kind,
            name = name,
            weights = weights.astype(numpy.float32),
            bias = bias.astype(numpy.float32),
            stride = args['stride'],
            padding = SAME))
    
    return FomoModel(config, layers, F32)


def forward(model, image):
    """
    Runs the model on single image.
    
    Args:
        model: pyfomo.FomoModel
            Model to run.
        
        image: pyfomo.Tensor
            Image tensor (1, s, s, 3) with values in [0, 1].
    
    Returns:
        pyfomo.GridHeatmap
            Per-cell class probabilities.
    """
    
    return model.Forward(image)
