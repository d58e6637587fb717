"""
Domain Exceptions Module

This module defines custom exceptions for input, usage and numeric failures.
Each exception is raised in the service layer and mapped to a process exit
code by the CLI exception handler.

Conventions:
- Raise these exceptions in services instead of printing or exiting.
- Convert them to exit codes only in the CLI layer.
- Keep exceptions framework-agnostic so the services stay usable as a library.
"""

# ========================
# General Exceptions
# ========================

from typing import Union


class ResourceNotFoundException(Exception):
    """
    Raised when a referenced resource does not exist.

    Args:
        resource_name (str): The kind of resource (e.g., "Node", "Feature").
        resource_identifier (int|str): The identifier that was looked up.

    Attributes:
        resource_name (str): The kind of resource.
        identifier (int|str): The identifier that was looked up.
    """

    def __init__(self, resource_name: str, resource_identifier: Union[int, str]) -> None:
        super().__init__(f"{resource_name} with identifier '{resource_identifier}' not found.")
        self.resource_name = resource_name
        self.identifier = resource_identifier


class DuplicateResourceException(Exception):
    """
    Raised when a resource that must be unique is declared twice.

    Args:
        resource_name (str): The kind of resource (e.g., "Label").
        identifier (str): The duplicated identifier.
    """

    def __init__(self, resource_name: str, identifier: str) -> None:
        super().__init__(f"{resource_name} '{identifier}' already exists.")
        self.resource_name = resource_name
        self.identifier = identifier


class InvalidInputException(Exception):
    """
    Raised when input data is invalid.

    Args:
        message (str, optional): Custom error message. Defaults to a generic input error.
    """

    def __init__(self, message: str = "Invalid input provided.") -> None:
        super().__init__(message)


class UsageException(Exception):
    """
    Raised when a command is invoked with an inconsistent set of arguments.

    Args:
        message (str, optional): Custom error message. Defaults to a generic usage error.
    """

    def __init__(self, message: str = "Invalid command usage.") -> None:
        super().__init__(message)


class NumericFailureException(Exception):
    """
    Raised when a numerical procedure cannot produce a valid result.

    Args:
        message (str, optional): Custom error message. Defaults to a generic numeric error.
    """

    def __init__(self, message: str = "A numerical failure occurred.") -> None:
        super().__init__(message)


# ========================
# Input-File Exceptions
# ========================


class MalformedLineException(InvalidInputException):
    """
    Raised when a line of a text input cannot be parsed.

    Args:
        source (str): Name of the input (file name or stream label).
        line_number (int): 1-based line number of the offending line.
        reason (str): What is wrong with the line.
    """

    def __init__(self, source: str, line_number: int, reason: str) -> None:
        super().__init__(f"{source}:{line_number}: {reason}")
        self.source = source
        self.line_number = line_number


class EmptyInputException(InvalidInputException):
    """
    Raised when an input holds no usable records.

    Args:
        source (str): Name of the input that turned out empty.
    """

    def __init__(self, source: str) -> None:
        super().__init__(f"{source} contains no usable records.")
        self.source = source


# ========================
# Graph-Specific Exceptions
# ========================


class UnknownNodeException(ResourceNotFoundException):
    """
    Raised when a node identifier is not part of the graph.

    Args:
        node_id (str): The external node identifier.
    """

    def __init__(self, node_id: str) -> None:
        super().__init__("Node", node_id)


class DuplicateLabelException(DuplicateResourceException):
    """
    Raised when a node receives a second label line.

    Args:
        node_id (str): The external node identifier.
    """

    def __init__(self, node_id: str) -> None:
        super().__init__("Label for node", node_id)


class ShapeMismatchException(InvalidInputException):
    """
    Raised when matrices that are combined disagree in shape.

    Args:
        message (str): Description of the mismatch.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message)


class SizeGuardException(InvalidInputException):
    """
    Raised when a dense computation is requested on a graph that is too large.

    Args:
        num_nodes (int): Number of nodes involved.
        limit (int): Configured maximum.
    """

    def __init__(self, num_nodes: int, limit: int) -> None:
        super().__init__(
            f"Dense computation on {num_nodes} nodes exceeds the limit of {limit} "
            "(raise NETFACTOR_DENSE_NODE_LIMIT to override)."
        )
        self.num_nodes = num_nodes
        self.limit = limit


class InsufficientDataException(InvalidInputException):
    """
    Raised when the data cannot support a requested sampling or split.

    Args:
        message (str, optional): Custom error message.
    """

    def __init__(self, message: str = "Not enough data for the requested operation.") -> None:
        super().__init__(message)


# ========================
# Factorization Exceptions
# ========================


class BinomialSupportException(NumericFailureException):
    """
    Raised when an observed count exceeds its trial bound (D > Q).

    Args:
        violations (int): Number of entries with D > Q.
    """

    def __init__(self, violations: int) -> None:
        super().__init__(f"{violations} co-occurrence counts exceed their Q bound; Q and D are inconsistent.")
        self.violations = violations


class DivergenceException(NumericFailureException):
    """
    Raised when the factorization loss becomes non-finite or explodes.

    Args:
        step_size (float): The step size in use.
        loss (float): The offending loss value.
    """

    def __init__(self, step_size: float, loss: float) -> None:
        super().__init__(f"Training diverged (loss={loss:.6g}) with step size {step_size:g}; lower --step.")
        self.step_size = step_size
        self.loss = loss
