import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "rotatable_ris.settings")
django.setup()

TESTDIR = os.path.dirname(os.path.abspath(__file__)) + "/"


def make_geometry(**kwargs):
    from rotatable_ris.models import SystemGeometry

    d = {"n_bs_antennas": 32, "n_ris_elements": 64, "n_blocks": 8,
         "block_size": 8, "aoa_ris": 1.5707963267948966,
         "aod_ris": 1.0471975511965976, "aod_bs": 1.0471975511965976,
         "rician_bs_ris": 10.0, "rician_ris_ue": 10.0}
    d.update(kwargs)
    return SystemGeometry(**d)
