# import modules
import numpy
from ..lockable import Lockable
from ..errors import ShapeError


class Tensor(Lockable):
    """
    The pyfomo.Tensor class holds a dense 4-D real-valued array in row-major
    (n, h, w, c) order. It is used for input images, intermediate activations
    and weight kernels (kh, kw, cin, cout). The data are always stored as
    32-bit floats and the instance is locked after initialization.
    
    Attributes:
        
        Shape: (int, int, int, int)
            Tensor dimensions.
        
        Data: numpy.ndarray
            Flat row-major view of the values.
        
        Array: numpy.ndarray
            4-D view of the values.
    """
    
    
    def __init__(self, data, shape=None):
        """
        Initializes a new instance of Tensor.
        
        Args:
            data: numpy.ndarray or sequence
                Tensor values. If 'shape' is given, the values are expected
                to be flat in row-major order.
            
            shape: (int, int, int, int) or None
                Tensor dimensions for flat data.
        """
        
        super().__init__()
        
        # copy data
        array = numpy.array(data, dtype=numpy.float32)
        
        # reshape flat data
        if shape is not None:
            shape = tuple(int(x) for x in shape)
            if len(shape) != 4 or any(x < 0 for x in shape):
                message = "Tensor shape must have four non-negative dimensions! --> '%s'" % (shape,)
                raise ShapeError(message)
            
            if array.size != int(numpy.prod(shape)):
                message = "Data length does not match tensor shape! --> '%d' vs '%s'" % (array.size, shape)
                raise ShapeError(message)
            
            array = array.reshape(shape)
        
        # check dimensions
        if array.ndim != 4:
            message = "Tensor must have four dimensions! --> '%s'" % (array.shape,)
            raise ShapeError(message)
        
        # check values
        if not numpy.all(numpy.isfinite(array)):
            message = "Tensor values must be finite!"
            raise ValueError(message)
        
        self._array = array
        
        # lock
        self.Lock()
    
    
    def __str__(self):
        """Gets standard string representation."""
        
        return "Tensor %s" % (self.Shape,)
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "%s(%s)" % (self.__class__.__name__, self.__str__())
    
    
    @property
    def Shape(self):
        """
        Gets tensor dimensions.
        
        Returns:
            (int, int, int, int)
                Tensor dimensions.
        """
        
        return tuple(self._array.shape)
    
    
    @property
    def Data(self):
        """
        Gets flat row-major values.
        
        Returns:
            numpy.ndarray
                Read-only flat values.
        """
        
        return self._array.reshape(-1)
    
    
    @property
    def Array(self):
        """
        Gets values as 4-D array.
        
        Returns:
            numpy.ndarray
                Read-only 4-D values.
        """
        
        return self._array
    
    
    @property
    def Size(self):
        """Gets number of elements."""
        
        return int(self._array.size)
