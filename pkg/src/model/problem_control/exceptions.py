# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""


class InvalidArgumentException(Exception):
    """
    InvalidArgumentException class.
    """

    def __init__(self, argument: str, message: str = "invalid argument") -> None:
        """
        Initiation method for Invalid Argument Exception.
        :param argument: Name of the offending argument.
        :param message: Message to include in exception.
        """
        self.argument = argument
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.argument}"


class InvalidStateException(Exception):
    """
    InvalidStateException class.
    """

    def __init__(self, component: str, message: str = "component is in an invalid state") -> None:
        """
        Initiation method for Invalid State Exception.
        :param component: Component in invalid state.
        :param message: Message to include in exception.
        """
        self.component = component
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.component}"


class CapacityException(Exception):
    """
    CapacityException class.
    """

    def __init__(self, requested: int, limit: int, message: str = "enumeration budget exceeded") -> None:
        """
        Initiation method for Capacity Exception.
        :param requested: Requested size.
        :param limit: Allowed size.
        :param message: Message to include in exception.
        """
        self.requested = requested
        self.limit = limit
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : requested {self.requested}, limit {self.limit}"


class SingularMatrixException(Exception):
    """
    SingularMatrixException class.
    """

    def __init__(self, matrix: str, reciprocal_condition: float,
                 message: str = "matrix is singular or too badly conditioned") -> None:
        """
        Initiation method for Singular Matrix Exception.
        :param matrix: Name of the matrix.
        :param reciprocal_condition: Estimated reciprocal condition number.
        :param message: Message to include in exception.
        """
        self.matrix = matrix
        self.reciprocal_condition = reciprocal_condition
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.matrix} (rcond={self.reciprocal_condition:.3e})"


class InvalidSetException(Exception):
    """
    InvalidSetException class.
    """

    def __init__(self, set_type: str, message: str = "uncertainty set is empty or unbounded") -> None:
        """
        Initiation method for Invalid Set Exception.
        :param set_type: Type of the uncertainty set.
        :param message: Message to include in exception.
        """
        self.set_type = set_type
        self.message = message
        super().__init__(self.message)

    def __str__(self) -> str:
        """
        Method for encoding exception as string.
        :return: Exception string.
        """
        return f"{self.message} : {self.set_type}"
