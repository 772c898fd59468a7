# import modules
import os.path
import json
import numpy
from ..errors import ManifestError

# define current version
MANIFEST_VERSION = "lvx-manifest/1"


class ManifestEntry(object):
    """
    Holds single annotated image.
    
    Attributes:
        
        Image: str
            Image path relative to the manifest directory.
        
        Width: int
            Image width in pixels.
        
        Height: int
            Image height in pixels.
        
        Objects: ((str, float, float),)
            Objects as (class_name, centroid_x, centroid_y).
    """
    
    
    def __init__(self, image, width, height, objects=()):
        """Initializes a new instance of ManifestEntry."""
        
        self.Image = image
        self.Width = width
        self.Height = height
        self.Objects = tuple((c, float(x), float(y)) for c, x, y in objects)
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "ManifestEntry(%s, %dx%d, %d objects)" % (self.Image, self.Width, self.Height, len(self.Objects))
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'image': self.Image,
            'width': self.Width,
            'height': self.Height,
            'objects': [{'class': c, 'x': x, 'y': y} for c, x, y in self.Objects]}


class DatasetManifest(object):
    """
    The pyfomo.DatasetManifest class holds the list of annotated images of a
    dataset. Objects are annotated by their centroids only. Image paths are
    relative to the manifest directory (the 'Root').
    
    Attributes:
        
        Version: str
            Schema version.
        
        Classes: (str,)
            Unique foreground class names. Class id i+1 belongs to Classes[i].
        
        Entries: (pyfomo.ManifestEntry,)
            Annotated images.
        
        Root: str
            Directory used to resolve image paths.
    """
    
    
    def __init__(self, classes, entries, root="", version=MANIFEST_VERSION):
        """
        Initializes a new instance of DatasetManifest.
        
        Args:
            classes: (str,)
                Unique foreground class names.
            
            entries: (pyfomo.ManifestEntry,)
                Annotated images.
            
            root: str
                Directory used to resolve image paths.
            
            version: str
                Schema version.
        """
        
        self.Version = version
        self.Classes = tuple(classes)
        self.Entries = tuple(entries)
        self.Root = root
        
        self.Validate()
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "DatasetManifest(%d classes, %d entries)" % (len(self.Classes), len(self.Entries))
    
    
    def __len__(self):
        """Gets number of entries."""
        
        return len(self.Entries)
    
    
    def Validate(self):
        """Checks manifest consistency."""
        
        # check version
        if self.Version != MANIFEST_VERSION:
            message = "Unsupported manifest version! --> '%s'" % self.Version
            raise ManifestError(message)
        
        # check classes
        if not self.Classes:
            message = "Manifest must define at least one class!"
            raise ManifestError(message)
        
        if len(set(self.Classes)) != len(self.Classes):
            message = "Manifest class names must be unique! --> '%s'" % ", ".join(self.Classes)
            raise ManifestError(message)
        
        # check entries
        for i, entry in enumerate(self.Entries):
            
            if not entry.Image:
                message = "Manifest entry has no image! --> entry %d" % i
                raise ManifestError(message)
            
            if not isinstance(entry.Width, int) or not isinstance(entry.Height, int) or entry.Width < 1 or entry.Height < 1:
                message = "Manifest entry has invalid size! --> entry %d '%s'" % (i, entry.Image)
                raise ManifestError(message)
            
            for j, (name, x, y) in enumerate(entry.Objects):
                
                if name not in self.Classes:
                    message = "Unknown object class! --> entry %d '%s' object %d '%s'" % (i, entry.Image, j, name)
                    raise ManifestError(message)
                
                if not (0 <= x < entry.Width and 0 <= y < entry.Height):
                    message = "Object centroid out of image! --> entry %d '%s' object %d at (%s, %s)" % (i, entry.Image, j, x, y)
                    raise ManifestError(message)
    
    
    def ClassId(self, name):
        """Gets class id (1-based) of given class name."""
        
        return self.Classes.index(name) + 1
    
    
    def ImagePath(self, entry):
        """Gets full path of the entry image."""
        
        return os.path.join(self.Root, entry.Image)
    
    
    def Subset(self, indices):
        """
        Creates manifest of selected entries.
        
        Args:
            indices: (int,)
                Entry indices.
        
        Returns:
            pyfomo.DatasetManifest
                New manifest sharing classes and root.
        """
        
        return DatasetManifest(self.Classes, [self.Entries[i] for i in indices], self.Root, self.Version)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'version': self.Version,
            'classes': list(self.Classes),
            'entries': [e.ToJSON() for e in self.Entries]}


def load_manifest(path):
    """
    Reads and validates dataset manifest.
    
    Args:
        path: str
            Manifest file path.
    
    Returns:
        pyfomo.DatasetManifest
            Dataset manifest.
    """
    
    # check file
    if not os.path.exists(path):
        message = "Manifest file not found! --> '%s'" % path
        raise IOError(message)
    
    # read data
    with open(path, 'r', encoding='utf-8') as rf:
        try:
            data = json.load(rf)
        except ValueError as e:
            message = "Manifest is not valid JSON! --> '%s'" % e
            raise ManifestError(message)
    
    return parse_manifest(data, os.path.dirname(os.path.abspath(path)))


def parse_manifest(data, root=""):
    """
    Creates manifest from JSON-like object.
    
    Args:
        data: dict
            Manifest document.
        
        root: str
            Directory used to resolve image paths.
    
    Returns:
        pyfomo.DatasetManifest
            Dataset manifest.
    """
    
    if not isinstance(data, dict):
        message = "Manifest must be a JSON object!"
        raise ManifestError(message)
    
    for key in ('version', 'classes', 'entries'):
        if key not in data:
            message = "Manifest is missing required field! --> '%s'" % key
            raise ManifestError(message)
    
    entries = []
    for i, item in enumerate(data['entries']):
        try:
            objects = [(o['class'], o['x'], o['y']) for o in item.get('objects', [])]
            entries.append(ManifestEntry(item['image'], item['width'], item['height'], objects))
        
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            message = "Manifest entry is malformed! --> entry %d (%s)" % (i, e)
            raise ManifestError(message)
    
    return DatasetManifest(data['classes'], entries, root, data['version'])


def save_manifest(manifest, path):
    """
    Writes dataset manifest.
    
    Args:
        manifest: pyfomo.DatasetManifest
            Manifest to write.
        
        path: str
            Output file path.
    """
    
    with open(path, 'w', encoding='utf-8') as wf:
        json.dump(manifest.ToJSON(), wf, indent=4, ensure_ascii=False)


def split_manifest(manifest, fraction=0.8, seed=42):
    """
    Splits manifest entries into train and test part.
    
    Args:
        manifest: pyfomo.DatasetManifest
            Manifest to split.
        
        fraction: float
            Train fraction.
        
        seed: int
            Random seed.
    
    Returns:
        (pyfomo.DatasetManifest, pyfomo.DatasetManifest)
            Train and test manifest.
    """
    
    if not 0 < fraction < 1:
        message = "Split fraction must be within (0, 1)! --> '%s'" % fraction
        raise ManifestError(message)
    
    rng = numpy.random.default_rng(seed)
    order = rng.permutation(len(manifest))
    size = int(round(len(manifest) * fraction))
    
    train = sorted(order[:size].tolist())
    test = sorted(order[size:].tolist())
    
    return manifest.Subset(train), manifest.Subset(test)
