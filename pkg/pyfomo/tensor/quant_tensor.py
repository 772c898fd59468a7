# import modules
import math
import numpy
from ..lockable import Lockable
from ..errors import ShapeError

# define constants
QMIN = -128
QMAX = 127


class QuantParams(Lockable):
    """
    Holds affine quantization parameters. A quantized element q represents the
    real value scale * (q - zero_point).
    
    Attributes:
        
        Scale: float
            Positive step between two consecutive quantized values.
        
        ZeroPoint: int
            Quantized value representing real zero.
    """
    
    
    def __init__(self, scale, zero_point=0):
        """
        Initializes a new instance of QuantParams.
        
        Args:
            scale: float
                Positive quantization step.
            
            zero_point: int
                Quantized value representing real zero within [-128, 127].
        """
        
        super().__init__()
        
        # check scale
        scale = float(scale)
        if not math.isfinite(scale) or scale <= 0:
            message = "Quantization scale must be positive! --> '%s'" % scale
            raise ValueError(message)
        
        # check zero point
        if int(zero_point) != zero_point or not QMIN <= zero_point <= QMAX:
            message = "Zero point must be an integer within [-128, 127]! --> '%s'" % zero_point
            raise ValueError(message)
        
        self.Scale = scale
        self.ZeroPoint = int(zero_point)
        
        # lock
        self.Lock()
    
    
    def __eq__(self, other):
        """Compares two parameter sets."""
        
        if not isinstance(other, QuantParams):
            return False
        
        return self.Scale == other.Scale and self.ZeroPoint == other.ZeroPoint
    
    
    def __hash__(self):
        """Gets hash."""
        
        return hash((self.Scale, self.ZeroPoint))
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "%s(scale=%r, zero_point=%d)" % (self.__class__.__name__, self.Scale, self.ZeroPoint)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {'scale': self.Scale, 'zero_point': self.ZeroPoint}
    
    
    @staticmethod
    def FromJSON(data):
        """Creates parameters from JSON-like object."""
        
        return QuantParams(data['scale'], data['zero_point'])


class QuantTensor(Lockable):
    """
    The pyfomo.QuantTensor class holds a dense 4-D array of 8-bit signed
    integers together with the affine parameters needed to recover the real
    values.
    
    Attributes:
        
        Shape: (int, int, int, int)
            Tensor dimensions.
        
        Data: numpy.ndarray
            Flat row-major int8 values.
        
        Array: numpy.ndarray
            4-D int8 values.
        
        Params: pyfomo.QuantParams
            Quantization parameters.
    """
    
    
    def __init__(self, data, params, shape=None):
        """
        Initializes a new instance of QuantTensor.
        
        Args:
            data: numpy.ndarray or sequence
                Quantized values within [-128, 127].
            
            params: pyfomo.QuantParams
                Quantization parameters.
            
            shape: (int, int, int, int) or None
                Tensor dimensions for flat data.
        """
        
        super().__init__()
        
        # check range
        raw = numpy.asarray(data)
        if raw.size and (raw.min() < QMIN or raw.max() > QMAX):
            message = "Quantized values must be within [-128, 127]!"
            raise ValueError(message)
        
        array = numpy.array(raw, dtype=numpy.int8)
        
        # reshape flat data
        if shape is not None:
            shape = tuple(int(x) for x in shape)
            if array.size != int(numpy.prod(shape)):
                message = "Data length does not match tensor shape! --> '%d' vs '%s'" % (array.size, shape)
                raise ShapeError(message)
            array = array.reshape(shape)
        
        # check dimensions
        if array.ndim != 4:
            message = "Tensor must have four dimensions! --> '%s'" % (array.shape,)
            raise ShapeError(message)
        
        self._array = array
        self._params = params
        
        # lock
        self.Lock()
    
    
    def __str__(self):
        """Gets standard string representation."""
        
        return "QuantTensor %s %r" % (self.Shape, self._params)
    
    
    @property
    def Shape(self):
        """Gets tensor dimensions."""
        
        return tuple(self._array.shape)
    
    
    @property
    def Data(self):
        """Gets flat row-major int8 values."""
        
        return self._array.reshape(-1)
    
    
    @property
    def Array(self):
        """Gets values as 4-D int8 array."""
        
        return self._array
    
    
    @property
    def Params(self):
        """
        Gets quantization parameters.
        
        Returns:
            pyfomo.QuantParams
                Quantization parameters.
        """
        
        return self._params
    
    
    @property
    def Scale(self):
        """Gets quantization scale."""
        
        return self._params.Scale
    
    
    @property
    def ZeroPoint(self):
        """Gets quantization zero point."""
        
        return self._params.ZeroPoint
    
    
    def Dequantize(self):
        """
        Gets real values represented by current data.
        
        Returns:
            numpy.ndarray
                4-D float64 values.
        """
        
        return self._params.Scale * (self._array.astype(numpy.float64) - self._params.ZeroPoint)
