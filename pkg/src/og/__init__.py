"""Maritime object geolocation and anomaly detection toolkit."""

__version__ = "0.1.0"
