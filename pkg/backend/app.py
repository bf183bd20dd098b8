#Pseudo-Anosov flow toolkit - HTTP backend

import logging
import os
import sys
from typing import Any, Dict

from flask import Flask, jsonify, request
from flask_cors import CORS

#add project root to path
project_root = os.path.dirname(os.path.abspath(__file__))
if project_root not in sys.path:
    sys.path.append(project_root)

from assembly.manifold import assemble
from blueprint.conditions import euler_characteristic, validate_conditions
from blueprint.fat_graph import trace_boundary_cycles
from blueprint.parser import parse_blueprint
from closure.classification import classify_flow
from closure.gluing import parse_gluing, validate_gluing
from config import DEFAULT_KAPPA, DEFAULT_LAMBDA
from lozenge.skew_model import parse_orbit, skew_chain_connected
from returnmap.cones import verify_cones
from returnmap.return_system import ReturnMapSystem

# configuring logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

#cone checks over http stay coarse
MAX_HTTP_GRID = 400
ALLOWED_ORIGINS = os.environ.get("FLOW_API_ORIGINS", "http://localhost:3000,http://127.0.0.1:3000").split(",")
PORT = int(os.environ.get("PORT", "5000"))

app = Flask(__name__)
CORS(app, resources={
    r"/*": {
        "origins": ALLOWED_ORIGINS,
        "methods": ["GET", "POST", "OPTIONS"],
        "allow_headers": ["Content-Type"]
    }
})


def _payload() -> Dict[str, Any]:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise ValueError("request body must be a JSON object")
    return data


def _field(data: Dict[str, Any], name: str) -> Any:
    if name not in data:
        raise ValueError(f"missing field '{name}'")
    return data[name]


def _bad_request(e: Exception):
    logger.warning(f"Rejected request to {request.path}: {e}")
    return jsonify({'status': 'error', 'message': str(e)}), 400


def _server_error(e: Exception):
    logger.error(f"Error serving {request.path}: {e}", exc_info=True)
    return jsonify({'status': 'error', 'message': str(e)}), 500


@app.route('/health', methods=['GET'])
def health_check():
    return jsonify({'status': 'healthy', 'service': 'pa-flow-toolkit', 'version': '1.0.0'})


@app.route('/blueprint/validate', methods=['POST'])
def validate_blueprint():
    try:
        bp = parse_blueprint(_field(_payload(), 'blueprint'))
        cycles = trace_boundary_cycles(bp)
        report = validate_conditions(bp, cycles=cycles)
        euler = euler_characteristic(bp, cycles)
        body = report.to_dict()
        body['euler'] = {'chi_surface': euler.chi_surface, 'chi_closed': euler.chi_closed,
                         'orientable': euler.orientable}
        return jsonify(body)
    except ValueError as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error(e)


@app.route('/gluing/classify', methods=['POST'])
def classify_gluing():
    try:
        data = _payload()
        bp = parse_blueprint(_field(data, 'blueprint'))
        spec = parse_gluing(_field(data, 'gluing'))
        report = validate_gluing(assemble(bp), spec)
        if not report.passed:
            return jsonify({'status': 'invalid', **report.to_dict()})
        flow = classify_flow(bp, spec)
        return jsonify({
            'status': 'valid',
            'classification': flow.summary(),
            'kind': flow.kind.value,
            'singular_orbits': [{'vertex': v, 'p': p} for v, p in flow.singular_orbits],
        })
    except ValueError as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error(e)


@app.route('/cones/verify', methods=['POST'])
def cones_verify():
    try:
        data = _payload()
        bp = parse_blueprint(_field(data, 'blueprint'))
        spec = parse_gluing(_field(data, 'gluing'))
        grid = int(data.get('grid', 100))
        if not (2 <= grid <= MAX_HTTP_GRID):
            raise ValueError(f"grid must be between 2 and {MAX_HTTP_GRID}")
        sys_ = ReturnMapSystem(assemble(bp), spec, float(data.get('lambda', DEFAULT_LAMBDA)),
                               float(data.get('kappa', DEFAULT_KAPPA)))
        if data.get('reverse'):
            sys_ = sys_.reversed()
        return jsonify(verify_cones(sys_, grid).summary())
    except ValueError as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error(e)


@app.route('/skew/connected', methods=['POST'])
def skew_connected():
    try:
        data = _payload()
        connection = skew_chain_connected(parse_orbit(_field(data, 'first')),
                                          parse_orbit(_field(data, 'second')))
        return jsonify({'connection': connection.kind.value, 'length': connection.length})
    except ValueError as e:
        return _bad_request(e)
    except Exception as e:
        return _server_error(e)


if __name__ == '__main__':
    logger.info(f"Starting pseudo-Anosov flow toolkit API on port {PORT}")
    try:
        app.run(debug=False, host='0.0.0.0', port=PORT, threaded=True, use_reloader=False)
    except Exception as e:
        logger.error(f"Failed to start server: {e}")
        sys.exit(1)
