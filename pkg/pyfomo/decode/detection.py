# import modules
from ..lockable import Lockable
from ..errors import ConfigError


class Detection(Lockable):
    """
    Holds one decoded object centroid.
    
    Attributes:
        
        ClassId: int
            Foreground class (1 to num_classes).
        
        Confidence: float
            Maximum cell probability within the merged cluster.
        
        X: float
            Centroid x-coordinate in input pixels.
        
        Y: float
            Centroid y-coordinate in input pixels.
        
        CellCount: int
            Number of merged cells.
        
        Cells: ((int, int, float),)
            Merged cells as (row, col, prob). Empty for detections read from
            detections log.
    """
    
    
    def __init__(self, class_id, confidence, x, y, cell_count=1, cells=()):
        """
        Initializes a new instance of Detection.
        
        Args:
            class_id: int
                Foreground class.
            
            confidence: float
                Detection confidence in (0, 1].
            
            x: float
                Centroid x-coordinate in pixels.
            
            y: float
                Centroid y-coordinate in pixels.
            
            cell_count: int
                Number of merged cells.
            
            cells: ((int, int, float),)
                Merged cells as (row, col, prob).
        """
        
        super().__init__()
        
        # check class
        if int(class_id) != class_id or class_id < 1:
            message = "Detection class must be a foreground class! --> '%s'" % class_id
            raise ConfigError(message)
        
        # check confidence
        if not 0 < confidence <= 1:
            message = "Detection confidence must be within (0, 1]! --> '%s'" % confidence
            raise ConfigError(message)
        
        self.ClassId = int(class_id)
        self.Confidence = float(confidence)
        self.X = float(x)
        self.Y = float(y)
        self.CellCount = int(cell_count)
        self.Cells = tuple((int(r), int(c), float(p)) for r, c, p in cells)
        
        # lock
        self.Lock()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "Detection(class=%d, conf=%.3f, x=%.1f, y=%.1f, cells=%d)" % (self.ClassId, self.Confidence, self.X, self.Y, self.CellCount)
    
    
    def __eq__(self, other):
        """Compares two detections."""
        
        if not isinstance(other, Detection):
            return False
        
        return self.ToJSON() == other.ToJSON()
    
    
    def __hash__(self):
        """Gets hash."""
        
        return hash((self.ClassId, self.Confidence, self.X, self.Y, self.CellCount))
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'class': self.ClassId,
            'confidence': self.Confidence,
            'x': self.X,
            'y': self.Y,
            'cell_count': self.CellCount}
