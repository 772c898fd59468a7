# import modules
import numpy
from ..enums import *
from ..lockable import Lockable
from ..errors import ConfigError


class TargetGrid(Lockable):
    """
    Holds per-cell class labels used as training targets. Label 0 is the
    background, labels 1 to num_classes are the foreground classes.
    
    Attributes:
        
        Cells: numpy.ndarray
            Labels array (grid_h, grid_w) of int64.
    """
    
    
    def __init__(self, cells):
        """
        Initializes a new instance of TargetGrid.
        
        Args:
            cells: numpy.ndarray
                Labels array (grid_h, grid_w).
        """
        
        super().__init__()
        
        cells = numpy.array(cells, dtype=numpy.int64)
        
        if cells.ndim != 2:
            message = "Target grid must have two dimensions! --> '%s'" % (cells.shape,)
            raise ConfigError(message)
        
        if cells.size and cells.min() < 0:
            message = "Target labels must be non-negative! --> '%d'" % cells.min()
            raise ConfigError(message)
        
        self.Cells = cells
        
        # lock
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "TargetGrid(%dx%d, %d positive)" % (self.Cells.shape[0], self.Cells.shape[1], self.PositiveCount)
    
    
    @property
    def PositiveCount(self):
        """Gets number of foreground cells."""
        
        return int(numpy.count_nonzero(self.Cells))
    
    
    def Flipped(self):
        """Gets horizontally mirrored grid."""
        
        return TargetGrid(self.Cells[:, ::-1])


def rasterize_targets(objects, input_size, cell_size=CELL_SIZE, num_classes=None):
    """
    Converts object centroids into per-cell labels. The cell containing
    the centroid gets the object class, any other cell is background. Objects
    falling into the same cell collapse into single label, the later object
    wins for different classes.
    
    Args:
        objects: ((int, float, float),)
            Objects as (class_id, centroid_x, centroid_y) in pixels.
        
        input_size: int
            Image size in pixels.
        
        cell_size: int
            Cell size in pixels.
        
        num_classes: int or None
            Number of foreground classes to check labels against.
    
    Returns:
        pyfomo.train.TargetGrid
            Target labels.
    """
    
    grid = input_size // cell_size
    cells = numpy.zeros((grid, grid), dtype=numpy.int64)
    
    for i, (class_id, x, y) in enumerate(objects):
        
        # check class
        if class_id < 1 or (num_classes is not None and class_id > num_classes):
            message = "Object class out of range! --> object %d class '%s'" % (i, class_id)
            raise ConfigError(message)
        
        # check position
        if not (0 <= x < input_size and 0 <= y < input_size):
            message = "Object centroid out of image! --> object %d at (%s, %s)" % (i, x, y)
            raise ConfigError(message)
        
        # get cell
        col = min(int(numpy.floor(x / cell_size)), grid - 1)
        row = min(int(numpy.floor(y / cell_size)), grid - 1)
        
        cells[row, col] = class_id
    
    return TargetGrid(cells)
