"""
    File IO: JSON persistence of networks and reports, and export of experiment tables
    (CSV through pandas, netCDF through xarray).
"""
import json
import os

from .errors import NetworkError
from .network import Network

# Accepted fields of the network JSON schema. Anything else is rejected.
NETWORK_SCHEMA = {
    "network": {"required": ("inputs", "output", "neurons", "edges"),
                "optional": ("biases",)},
    "neuron": {"required": ("id", "kind"), "optional": ()},
    "edge": {"required": ("src", "dst", "w"), "optional": ()},
}

# Column order of experiment tables
HEATMAP_COLUMNS = ("n1", "n2", "draws", "convex", "icnn", "inconclusive",
                   "icnn_expected", "seconds")


def _check_fields(record, entity):
    if not isinstance(record, dict):
        raise NetworkError(f"Expecting a JSON object for {entity}. Given {type(record).__name__}")

    schema = NETWORK_SCHEMA[entity]
    unknown = set(record) - set(schema["required"]) - set(schema["optional"])
    if unknown:
        raise NetworkError(f"Unknown {entity} fields {sorted(unknown)}")

    missing = [key for key in schema["required"] if key not in record]
    if missing:
        raise NetworkError(f"Missing {entity} fields {missing}")


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_id(value, where):
    if not isinstance(value, str):
        raise NetworkError(f"Neuron ids in {where} must be strings. Given {value!r}")
    return value


def network_to_dict(net):
    return {
        "inputs": list(net.inputs),
        "output": net.output,
        "neurons": [{"id": n, "kind": k} for n, k in net.neurons],
        "edges": [{"src": s, "dst": t, "w": float(w)} for s, t, w in net.edges],
        "biases": {n: float(b) for n, b in net.biases.items()},
    }


def network_from_dict(data):
    """Validate a decoded JSON document against the schema and build the Network."""
    _check_fields(data, "network")

    if not isinstance(data["neurons"], list) or not isinstance(data["edges"], list):
        raise NetworkError("'neurons' and 'edges' must be JSON arrays")
    if not isinstance(data["inputs"], list):
        raise NetworkError("'inputs' must be a JSON array")
    inputs = [_check_id(n, "'inputs'") for n in data["inputs"]]
    _check_id(data["output"], "'output'")

    neurons = []
    for record in data["neurons"]:
        _check_fields(record, "neuron")
        neurons.append((_check_id(record["id"], "'neurons'"), record["kind"]))

    edges = []
    for record in data["edges"]:
        _check_fields(record, "edge")
        if not _is_number(record["w"]):
            raise NetworkError(f"Edge weight must be a number. Given {record['w']!r}")
        edges.append((_check_id(record["src"], "'edges'"), _check_id(record["dst"], "'edges'"),
                      float(record["w"])))

    biases = data.get("biases", {})
    if not isinstance(biases, dict) or not all(_is_number(b) for b in biases.values()):
        raise NetworkError("'biases' must map neuron ids to numbers")

    net = Network(neurons, edges, biases, inputs=inputs)

    if net.output != data["output"]:
        raise NetworkError(f"Declared output '{data['output']}' is not the output neuron "
                           f"'{net.output}'")
    return net


def _dump(document, sink):
    text = json.dumps(document, indent=2, allow_nan=False)
    if hasattr(sink, "write"):
        sink.write(text + "\n")
    else:
        with open(sink, "w") as f:
            f.write(text + "\n")


def save_network(net, sink):
    """Write `net` as JSON to a path or a text file object. Floats use round-trip repr."""
    _dump(network_to_dict(net), sink)


def load_network(source):
    """
    Read a network from a JSON path or a text file object.

    Raises NetworkError (or CycleError) for malformed JSON and invariant violations,
    FileNotFoundError for missing paths.
    """
    try:
        if hasattr(source, "read"):
            data = json.load(source)
        else:
            with open(source, "r") as f:
                data = json.load(f)
    except json.JSONDecodeError as err:
        raise NetworkError(f"Malformed network JSON: {err}") from err

    return network_from_dict(data)


def save_report(report, sink):
    """Write a ConvexityReport (or its dict form) as JSON."""
    document = report.to_dict() if hasattr(report, "to_dict") else report
    _dump(document, sink)


def save_table(dataset, path, columns=HEATMAP_COLUMNS):
    """
    Export an experiment Dataset: netCDF for '.nc' paths, CSV otherwise. Every column but
    'seconds' is deterministic; missing values are written as empty fields.
    """
    if str(path).endswith(".nc"):
        dataset.to_netcdf(path)
        return

    frame = dataset.to_dataframe().reset_index()
    frame = frame[[c for c in columns if c in frame.columns]]
    frame.to_csv(path, index=False, na_rep="")


def ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        os.makedirs(parent)
    return path
