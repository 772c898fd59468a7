# import modules
import numpy
from ..enums import *
from ..errors import ConfigError, ShapeError
from ..model import GridHeatmap
from .detection import Detection

# define neighborhood
NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def threshold_cells(heatmap, tau=0.5):
    """
    Selects cells whose most probable class is a foreground class with
    probability of at least tau. Ties with background resolve to background,
    ties between foreground classes to the lowest class id.
    
    Args:
        heatmap: pyfomo.GridHeatmap
            Per-cell probabilities.
        
        tau: float
            Probability threshold within (0, 1).
    
    Returns:
        ((int, int, int, float),)
            Positive cells as (row, col, class_id, prob) in row-major order.
    """
    
    # check threshold
    if not 0 < tau < 1:
        message = "Threshold must be within (0, 1)! --> '%s'" % tau
        raise ConfigError(message)
    
    probs = heatmap.Array
    
    # get argmax, first index wins ties
    labels = numpy.argmax(probs, axis=-1)
    best = numpy.take_along_axis(probs, labels[..., None], axis=-1)[..., 0]
    
    # select cells
    rows, cols = numpy.nonzero((labels > 0) & (best >= tau))
    
    return tuple((int(r), int(c), int(labels[r, c]), float(best[r, c])) for r, c in zip(rows, cols))


def merge_and_centroid(cells, cell_size=CELL_SIZE, image_size=None):
    """
    Merges same-class cells connected under 8-connectivity into detections.
    Each detection centroid is the probability-weighted mean of member cell
    centers and its confidence is the maximum member probability.
    
    Args:
        cells: ((int, int, int, float),)
            Positive cells as (row, col, class_id, prob).
        
        cell_size: int
            Cell size in pixels.
        
        image_size: int or None
            Image size in pixels to check cells against.
    
    Returns:
        (pyfomo.Detection,)
            Detections sorted by descending confidence, then by row and col
            of the most probable cell.
    """
    
    # index cells
    lookup = {}
    for row, col, class_id, prob in cells:
        
        if image_size is not None:
            grid = image_size // cell_size
            if not (0 <= row < grid and 0 <= col < grid):
                message = "Cell out of grid! --> '(%d, %d)' in %dx%d" % (row, col, grid, grid)
                raise ShapeError(message)
        
        key = (int(row), int(col))
        if key in lookup and lookup[key][0] != class_id:
            message = "Cell assigned to multiple classes! --> '%s'" % (key,)
            raise ConfigError(message)
        
        lookup[key] = (int(class_id), float(prob))
    
    # find clusters
    clusters = []
    visited = set()
    
    for key in sorted(lookup):
        
        if key in visited:
            continue
        
        class_id = lookup[key][0]
        members = []
        stack = [key]
        visited.add(key)
        
        while stack:
            row, col = stack.pop()
            members.append((row, col, lookup[(row, col)][1]))
            
            for dr, dc in NEIGHBORS:
                other = (row + dr, col + dc)
                if other in lookup and other not in visited and lookup[other][0] == class_id:
                    visited.add(other)
                    stack.append(other)
        
        clusters.append((class_id, sorted(members)))
    
    # make detections
    items = []
    for class_id, members in clusters:
        
        probs = numpy.array([p for r, c, p in members])
        xs = numpy.array([c * cell_size + cell_size / 2 for r, c, p in members])
        ys = numpy.array([r * cell_size + cell_size / 2 for r, c, p in members])
        
        weight = probs.sum()
        x = float(numpy.dot(probs, xs) / weight)
        y = float(numpy.dot(probs, ys) / weight)
        
        # get most probable cell, row-major first
        top = max(members, key=lambda m: (m[2], -m[0], -m[1]))
        
        detection = Detection(class_id, top[2], x, y, len(members), members)
        items.append(((-top[2], top[0], top[1]), detection))
    
    items.sort(key=lambda item: item[0])
    
    return tuple(d for key, d in items)


def decode_heatmap(heatmap, tau=0.5, cell_size=CELL_SIZE):
    """
    Converts heatmap into detections.
    
    Args:
        heatmap: pyfomo.GridHeatmap
            Per-cell probabilities.
        
        tau: float
            Probability threshold.
        
        cell_size: int
            Cell size in pixels.
    
    Returns:
        (pyfomo.Detection,)
            Sorted detections.
    """
    
    cells = threshold_cells(heatmap, tau)
    
    return merge_and_centroid(cells, cell_size, heatmap.GridH * cell_size)


def detect(model, image, tau=0.5):
    """
    Runs the model on single image and decodes its heatmap.
    
    Args:
        model: pyfomo.FomoModel
            Model to run.
        
        image: pyfomo.Tensor
            Image tensor (1, s, s, 3) with values in [0, 1].
        
        tau: float
            Probability threshold.
    
    Returns:
        (pyfomo.Detection,)
            Sorted detections.
    """
    
    heatmap = model.Forward(image)
    
    return decode_heatmap(heatmap, tau, model.Config.CellSize)


def detect_batch(model, images, tau=0.5):
    """
    Runs the model on a batch of images and decodes every heatmap.
    
    Args:
        model: pyfomo.FomoModel
            Model to run.
        
        images: numpy.ndarray
            Images array (n, s, s, 3) with values in [0, 1].
        
        tau: float
            Probability threshold.
    
    Returns:
        ((pyfomo.Detection,),)
            Sorted detections per image.
    """
    
    probs = model.ForwardBatch(images)
    cell_size = model.Config.CellSize
    
    return tuple(decode_heatmap(GridHeatmap(p[None]), tau, cell_size) for p in probs)
