# import modules
from ..enums import *
from ..lockable import Lockable
from ..errors import ConfigError


class ModelConfig(Lockable):
    """
    Holds the FOMO model configuration.
    
    Attributes:
        
        InputSize: int
            Square input size in pixels, one of 32, 64 or 96.
        
        NumClasses: int
            Number of foreground classes (background excluded).
        
        WidthMultiplier: float
            Backbone channels multiplier.
        
        CellSize: int
            Grid cell size in pixels (fixed to 8).
        
        GridSize: int
            Number of cells along each side.
    """
    
    
    def __init__(self, input_size, num_classes=1, width_multiplier=0.35, cell_size=CELL_SIZE):
        """
        Initializes a new instance of ModelConfig.
        
        Args:
            input_size: int
                Square input size in pixels, one of 32, 64 or 96.
            
            num_classes: int
                Number of foreground classes.
            
            width_multiplier: float
                Backbone channels multiplier.
            
            cell_size: int
                Grid cell size in pixels.
        """
        
        super().__init__()
        
        # check input size
        if input_size not in INPUT_SIZES:
            message = "Input size must be one of the %s! --> '%s'" % (str(INPUT_SIZES), input_size)
            raise ConfigError(message)
        
        # check classes
        if int(num_classes) != num_classes or num_classes < 1:
            message = "Number of classes must be a positive integer! --> '%s'" % num_classes
            raise ConfigError(message)
        
        # check width
        if not width_multiplier > 0:
            message = "Width multiplier must be positive! --> '%s'" % width_multiplier
            raise ConfigError(message)
        
        # check cell size
        if cell_size != CELL_SIZE or input_size % cell_size:
            message = "Cell size is fixed to %d pixels! --> '%s'" % (CELL_SIZE, cell_size)
            raise ConfigError(message)
        
        self.InputSize = int(input_size)
        self.NumClasses = int(num_classes)
        self.WidthMultiplier = float(width_multiplier)
        self.CellSize = int(cell_size)
        
        # lock
        self.Lock()
    
    
    def __eq__(self, other):
        """Compares two configurations."""
        
        if not isinstance(other, ModelConfig):
            return False
        
        return self.ToJSON() == other.ToJSON()
    
    
    def __hash__(self):
        """Gets hash."""
        
        return hash(tuple(self.ToJSON().items()))
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "%s(%d, %d classes, width %.2f)" % (self.__class__.__name__, self.InputSize, self.NumClasses, self.WidthMultiplier)
    
    
    @property
    def GridSize(self):
        """Gets number of cells along each side."""
        
        return self.InputSize // self.CellSize
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'input_size': self.InputSize,
            'num_classes': self.NumClasses,
            'width_multiplier': self.WidthMultiplier,
            'cell_size': self.CellSize}
    
    
    @staticmethod
    def FromJSON(data):
        """Creates configuration from JSON-like object."""
        
        return ModelConfig(
            input_size = data['input_size'],
            num_classes = data['num_classes'],
            width_multiplier = data['width_multiplier'],
            cell_size = data['cell_size'])
