# import objects
from .detection import Detection
from .decoder import threshold_cells, merge_and_centroid, decode_heatmap, detect, detect_batch
from .log import write_detections, read_detections
