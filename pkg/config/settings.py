class AppSettings:
    """
    Configuración centralizada del conjunto de herramientas de normas.

    Contiene los valores por defecto de la aplicación: formato de los documentos,
    topes de exploración, parámetros de las búsquedas y de los gráficos.
    Se usan variables de clase para poder leerlas desde cualquier módulo sin
    instanciar nada; los topes efectivos de cada ejecución los decide
    RuntimeConfig (variables de entorno y flags de la línea de comandos).
    """

    # ==========================================
    # FORMATO DE LOS DOCUMENTOS
    # ==========================================

    # Versión del esquema incluida en todo documento de salida
    SCHEMA_VERSION = "1.0"

    # Indentación del JSON emitido (la salida debe ser estable byte a byte)
    JSON_INDENT = 2

    # ==========================================
    # TOPES DE EXPLORACIÓN
    # ==========================================

    # Número máximo de elementos descubiertos en una bola o búsqueda
    # Protege contra la explosión combinatoria de las bolas del grupo libre
    DEFAULT_BALL_CAP = 10**6

    # Longitud máxima de palabra para enumerar emparejamientos
    # Los emparejamientos crecen como números de Catalan
    DEFAULT_MATCH_CAP = 12

    # Segundos de cálculo por petición; None deja el tiempo sin límite
    DEFAULT_TIME_BUDGET = None

    # ==========================================
    # PARÁMETROS DE BÚSQUEDA
    # ==========================================

    # Longitud de palabra usada por el oráculo de emparejamientos
    DEFAULT_ORACLE_LENGTH = 8

    # Radio por defecto del dominio de los módulos de continuidad
    DEFAULT_MOC_RADIUS = 2

    # ==========================================
    # APROXIMACIÓN POR GRUPOS FINITOS
    # ==========================================

    # Etapa mínima n de la bola C_n usada por el pipeline
    MIN_PIPELINE_STAGE = 3

    # Etapa máxima que se intenta antes de declarar agotamiento
    MAX_PIPELINE_STAGE = 12

    # ==========================================
    # GRÁFICOS Y VISUALIZACIÓN
    # ==========================================

    # Esquema de colores por defecto para los gráficos
    DEFAULT_COLOR_SCHEME = "Pastel"

    # Altura estándar en píxeles para los gráficos
    CHART_HEIGHT = 400

    # ==========================================
    # CONCURRENCIA
    # ==========================================

    # Número máximo de hilos para preparar factores en paralelo
    MAX_CONCURRENT_WORKERS = 4
