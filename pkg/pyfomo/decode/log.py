# import modules
import os.path
from ..errors import ManifestError
from .detection import Detection

# define columns
COLUMNS = ("image_id", "class", "confidence", "x", "y", "cell_count")


def write_detections(path, records):
    """
    Writes detections into tab-separated log with header line.
    
    Args:
        path: str
            Output file path.
        
        records: ((str, pyfomo.Detection),)
            Detections with the id of their image.
    """
    
    with open(path, 'w', encoding='utf-8') as wf:
        
        wf.write("\t".join(COLUMNS) + "\n")
        
        for image_id, det in records:
            wf.write("%s\t%d\t%r\t%r\t%r\t%d\n" % (image_id, det.ClassId, det.Confidence, det.X, det.Y, det.CellCount))


def read_detections(path):
    """
    Reads detections from tab-separated log.
    
    Args:
        path: str
            Detections log path.
    
    Returns:
        ((str, pyfomo.Detection),)
            Detections with the id of their image.
    """
    
    # check file
    if not os.path.exists(path):
        message = "Detections file not found! --> '%s'" % path
        raise IOError(message)
    
    records = []
    
    with open(path, 'r', encoding='utf-8') as rf:
        
        # check header
        header = rf.readline().rstrip("\n").split("\t")
        if tuple(header) != COLUMNS:
            message = "Unknown detections header! --> '%s'" % "\t".join(header)
            raise ManifestError(message)
        
        # read records
        for i, line in enumerate(rf):
            
            line = line.rstrip("\n")
            if not line:
                continue
            
            parts = line.split("\t")
            if len(parts) != len(COLUMNS):
                message = "Invalid detections record! --> line %d" % (i+2)
                raise ManifestError(message)
            
            det = Detection(
                class_id = int(parts[1]),
                confidence = float(parts[2]),
                x = float(parts[3]),
                y = float(parts[4]),
                cell_count = int(parts[5]))
            
            records.append((parts[0], det))
    
    return tuple(records)
