import os
import sys

import pytest

#tests import modules from the backend root, as main.py does
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from assembly.manifold import assemble
from blueprint.catalogue import (CIRCLE_TEXT, FIGURE_EIGHT_TEXT, circle_blueprint, figure_eight_blueprint,
                                 theta_blueprint)
from closure.gluing import parse_gluing, torus_bundle_gluing
from returnmap.return_system import ReturnMapSystem

CAT_MAP = (1, 1, 1, 2)

CIRCLE_GLUING_TEXT = """\
# outgoing torus 1 onto incoming torus 0
match 1 0 L=1,1,1,2
"""

THETA6_GLUING_TEXT = """\
match 1 0 L=1,1,1,2
match 3 2 L=1,1,1,2
match 5 4 L=1,1,1,2
"""

#rungs [x, y] joined by a connector w whose end holds y and the next rung's x
LADDER_TEXT = """\
point x0 y0 x1 y1 z0
segment r0: x0 y0
segment r1: x1 y1
segment w0: z0 y0
nonsep y0 x1 via w0
"""

PERIODIC_LADDER_TEXT = """\
point x y z
segment r: x y
segment w: z y
nonsep y x@1 via w
periodic shift: x>x@1 y>y@1 z>z@1
"""

PERIODIC_TRIPOD_TEXT = """\
point p q
segment line: p p@1
segment branch: p q
periodic shift:
"""


@pytest.fixture
def circle():
    return circle_blueprint(2)


@pytest.fixture
def figure_eight():
    return figure_eight_blueprint(twisted=True)


@pytest.fixture
def theta6():
    return theta_blueprint(6)


@pytest.fixture
def circle_gluing():
    return torus_bundle_gluing(CAT_MAP)


@pytest.fixture
def circle_system(circle, circle_gluing):
    return ReturnMapSystem(assemble(circle), circle_gluing, lam=50.0, kappa=0.2)


@pytest.fixture
def circle_files(tmp_path):
    blueprint = tmp_path / 'circle.bp'
    blueprint.write_text(CIRCLE_TEXT)
    gluing = tmp_path / 'circle.glue'
    gluing.write_text(CIRCLE_GLUING_TEXT)
    return str(blueprint), str(gluing)


@pytest.fixture
def figure_eight_file(tmp_path):
    path = tmp_path / 'figure8.bp'
    path.write_text(FIGURE_EIGHT_TEXT)
    return str(path)


@pytest.fixture
def theta6_gluing():
    return parse_gluing(THETA6_GLUING_TEXT)
