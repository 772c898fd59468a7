# import modules
import numpy
from ..errors import ManifestError
from .ppm import read_ppm
from .resize import resize_array, rescale_objects
from .synth import synthesize


class Dataset(object):
    """
    Holds images at model input size with their ground-truth objects.
    
    Attributes:
        
        Images: numpy.ndarray
            Images array (n, s, s, 3) of float32 within [0, 1].
        
        Objects: (((int, float, float),),)
            Objects per image as (class_id, x, y) in pixels.
        
        ClassNames: (str,)
            Foreground class names.
        
        Names: (str,)
            Image ids.
    """
    
    
    def __init__(self, images, objects, class_names, names=None):
        """Initializes a new instance of Dataset."""
        
        images = numpy.asarray(images, dtype=numpy.float32)
        
        if images.ndim != 4 or len(images) != len(objects):
            message = "Images do not match objects! --> '%s' vs '%d'" % (images.shape, len(objects))
            raise ManifestError(message)
        
        if names is None:
            names = ["%d" % i for i in range(len(images))]
        
        self.Images = images
        self.Objects = tuple(tuple(o) for o in objects)
        self.ClassNames = tuple(class_names)
        self.Names = tuple(names)
    
    
    def __len__(self):
        """Gets number of images."""
        
        return len(self.Images)
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "Dataset(%d images, %d classes)" % (len(self), self.NumClasses)
    
    
    @property
    def NumClasses(self):
        """Gets number of foreground classes."""
        
        return len(self.ClassNames)
    
    
    @property
    def InputSize(self):
        """Gets image size."""
        
        return self.Images.shape[1]
    
    
    def Subset(self, indices):
        """
        Creates dataset of selected images.
        
        Args:
            indices: (int,)
                Image indices.
        
        Returns:
            pyfomo.Dataset
                New dataset.
        """
        
        indices = [int(i) for i in indices]
        
        return Dataset(
            images = self.Images[indices],
            objects = [self.Objects[i] for i in indices],
            class_names = self.ClassNames,
            names = [self.Names[i] for i in indices])


def load_dataset(manifest, input_size):
    """
    Loads manifest images resized to model input with rescaled objects.
    
    Args:
        manifest: pyfomo.DatasetManifest
            Dataset manifest.
        
        input_size: int
            Model input size in pixels.
    
    Returns:
        pyfomo.Dataset
            Loaded dataset.
    """
    
    images = []
    objects = []
    
    for i, entry in enumerate(manifest.Entries):
        
        pixels = read_ppm(manifest.ImagePath(entry))
        
        # check size
        if pixels.shape[:2] != (entry.Height, entry.Width):
            message = "Image size does not match manifest! --> entry %d '%s' %dx%d vs %dx%d" % (i, entry.Image, pixels.shape[1], pixels.shape[0], entry.Width, entry.Height)
            raise ManifestError(message)
        
        # resize
        data = pixels[None].astype(numpy.float32) / 255.
        images.append(resize_array(data, input_size, input_size)[0])
        
        objs = [(manifest.ClassId(c), x, y) for c, x, y in entry.Objects]
        objects.append(rescale_objects(objs, entry.Width, entry.Height, input_size))
    
    if images:
        images = numpy.stack(images)
    else:
        images = numpy.zeros((0, input_size, input_size, 3), dtype=numpy.float32)
    
    return Dataset(images, objects, manifest.Classes, [e.Image for e in manifest.Entries])


def synthetic_dataset(config, input_size=None):
    """
    Generates synthetic corpus directly into memory.
    
    Args:
        config: pyfomo.SynthConfig
            Generator options.
        
        input_size: int or None
            Model input size. If not specified, the generated size is kept.
    
    Returns:
        pyfomo.Dataset
            Generated dataset.
    """
    
    pixels, objects = synthesize(config)
    images = pixels.astype(numpy.float32) / 255.
    
    # resize
    if input_size is not None and input_size != config.ImageSize:
        images = resize_array(images, input_size, input_size)
        objects = [rescale_objects(o, config.ImageSize, config.ImageSize, input_size) for o in objects]
    
    return Dataset(images, objects, config.ClassNames)
