#include "fixtures.hpp"

#include <fstream>
#include <stdexcept>

namespace jrefine::testsupport {

const std::string& matrix_test_class() {
  static const std::string kSource = R"JAVA(public class RealMatrixImplTest {
    private double[][] subTestData = { {1, 2, 3, 4}, {1.5, 2.5, 3.5, 4.5}, {2, 4, 6, 8} };
    private double[][] subColumn3 = { {4}, {4.5}, {8} };

    public void testGetColumnMatrix() {
        RealMatrix m = new RealMatrixImpl(subTestData);
        RealMatrix mColumn3 = new RealMatrixImpl(subColumn3);
        assertEquals("Column3", mColumn3, m.getColumnMatrix(3));
        assertThrows(MatrixIndexException.class, () -> m.getColumnMatrix(5));
    }
}
)JAVA";
  return kSource;
}

const std::string& matrix_test_hallucinated() {
  static const std::string kSource =
      R"JAVA(public void testGetColumnMatrix_1() {
    // Given a matrix built from the sub test data
    RealMatrix matrix = new RealMatrixImpl(subTestData);
    // When the last column is extracted
    RealMatrix expectedLastColumn = new RealMatrixImpl(subColumn3);
    // Then it equals the expected column matrix
    assertEquals(expectedLastColumn, matrix.getColumnMatrix(matrix.getColumnDimension() - 1));
}
)JAVA";
  return kSource;
}

std::string write_mock_fixture(const std::string& fixtures_dir,
                               const std::string& model,
                               const llm::PromptTemplate& tpl,
                               const llm::TestRenderContext& ctx,
                               const std::vector<std::string>& avoid_names,
                               const std::string& response) {
  llm::ChatRequest request;
  request.model = model;
  request.system = tpl.instruction;
  request.user = llm::build_user_message(tpl, ctx, avoid_names);
  std::string name = llm::mock_request_filename(request);
  std::ofstream out(fixtures_dir + "/" + name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write fixture " + name);
  out << response;
  return name;
}

}  // namespace jrefine::testsupport
