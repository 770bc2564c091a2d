# -*- coding: utf-8 -*-
"""
Image core: ingestion, integral images, box sums and raster output
"""

from .image import GrayImage, load_image
from .integral import IntegralImage, box_sum, box_sums, integral
from .writers import draw_circles, save_image, side_by_side

__all__ = [
    'GrayImage',
    'IntegralImage',
    'load_image',
    'integral',
    'box_sum',
    'box_sums',
    'save_image',
    'draw_circles',
    'side_by_side',
]
